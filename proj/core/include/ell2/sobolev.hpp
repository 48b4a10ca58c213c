#pragma once

#include <optional>
#include <vector>

#include "ell2/cutoff.hpp"
#include "ell2/numerics.hpp"
#include "ell2/polynomial.hpp"
#include "ell2/sampling.hpp"
#include "ell2/surface.hpp"

namespace ell2 {

// All multi-indices over `vars` with 1 <= |alpha| <= m.
std::vector<MultiIndex> multi_indices_upto(const std::vector<int>& vars, int m);

// D^alpha p.
RealPoly derivative(const RealPoly& p, const MultiIndex& alpha);

// (sum_{|alpha| <= m} a^alpha int_O |D^alpha f|^2 dP)^{1/2}, a^alpha = prod a_i^{2 alpha_i}.
// O is the whole space when `domain` is empty (exact moments), a half-space
// (exact half moments) or a ball in at most 3 active coordinates (quadrature).
double sobolev_norm(const RealPoly& f, int m, const WeightSequence& w,
                    const std::optional<GaussGreenDomain>& domain = std::nullopt);

// max over tests of |int (D_i f) phi dP - int f (D_i^* phi) dP|.
double weak_derivative_defect(const RealPoly& f, int i, const std::vector<RealPoly>& tests,
                              const WeightSequence& w);

struct TranslationSides {
  double lhs = 0.0;  // int |f(x + t e_1)|^2 dP
  double rhs = 0.0;  // exp(-t^2 / (2 a_1^2)) int |f|^2 exp(t x_1 / a_1^2) dP
};
TranslationSides translation_identity_check(const RealPoly& f, double t, const WeightSequence& w);

struct UnboundednessRow {
  int n = 0;
  double lower = 0.0;
  double ratio = 0.0;  // ||f_n(tau_1)||_{H^1} / ||f_n||_{H^1}
  double upper = 0.0;
};
// f_n(x) = f(x_1 + n) with f(x) = exp(-1/(x(1-x))) on (0, 1).
UnboundednessRow translation_unboundedness_demo(int n, double a1);

// The flattening chart of { |x| > 1 } near e_1 on U_0 = B(e_1, 1/3):
// psi(x) = (|x| - 1, x_2, ...), h(xh) = sqrt((xh_1 + 1)^2 - sum_{i>=2} xh_i^2).
struct SphereChart {
  WeightSequence w;
  double radius = 1.0 / 3.0;

  explicit SphereChart(WeightSequence weights) : w(std::move(weights)) {}

  double delta() const;
  double C1() const;
  double C2() const;
  double C() const;

  static std::vector<double> psi(const std::vector<double>& x);
  static std::vector<double> tau(const std::vector<double>& xh);
  static double g(const std::vector<double>& x);
  static double h(const std::vector<double>& xh);
  static double D1g(const std::vector<double>& x);
  static double D1h(const std::vector<double>& xh);
  // d h / d xh_i.
  static double Dih(const std::vector<double>& xh, int i);
  // Measure Jacobians of the chart maps.
  double J(const std::vector<double>& xh) const;
  double J1(const std::vector<double>& x) const;
};

struct ChartSampleReport {
  long points = 0;
  double max_product_defect = 0.0;  // max | |D_1h(psi)| |D_1g| - 1 |
  double J_min = 0.0, J_max = 0.0;
  double J1_min = 0.0, J1_max = 0.0;
  bool condition_holds = true;
};
// Uniform points of U_0 in `dims` coordinates. Throws ConditionViolated when
// the delta bounds fail at a sampled point.
ChartSampleReport chart_sample_check(const SphereChart& c, int dims, long points, const SampleStream& stream);

struct ChartMeasureSides {
  double direct = 0.0;  // int_{U_0 n O} F dP
  double pulled = 0.0;  // int_{psi(U_0) n H} F(tau) J dP
};
// Both sides by quadrature in dims 2 or 3.
ChartMeasureSides chart_measure_identity(const SphereChart& c, const BlackBox& F, int dims);

struct NormEquivalence {
  double C = 0.0;
  double lhs = 0.0;  // C^{-1} ||f||_{W^{1,2}(U_0 n O)}
  double mid = 0.0;  // ||f(tau)||_{W^{1,2}(psi(U_0) n H)}
  double rhs = 0.0;  // C ||f||
  bool holds() const { return lhs <= mid && mid <= rhs; }
};
NormEquivalence chart_norm_equivalence(const SphereChart& c, const RealPoly& f, int dims);

// ||X_k f - f||_{H^1} by Monte Carlo for k = 1..kmax, likelihood-ratio cut-offs.
std::vector<Estimate> cutoff_stability(const RealPoly& f, const CutoffSystem& cut, int kmax,
                                       const SampleStream& stream, long samples);

}  // namespace ell2
