#pragma once

#include <functional>
#include <vector>

#include "ell2/numerics.hpp"
#include "ell2/polynomial.hpp"
#include "ell2/sampling.hpp"

namespace ell2 {

// P_r: independent N(0, (r a_i)^2) coordinates.
struct ProductGaussian {
  WeightSequence weights;
  double r = 1.0;

  double sd(long i) const { return r * weights.a(i); }
  std::vector<double> sds(int dims) const;
};

double hellinger_1d(double a, double r, double s, double x1, double x2);

// Two shifted product Gaussians P_r(. - x1) and P_s(. - x2) on shared weights.
struct ShiftedGaussianPair {
  WeightSequence weights;
  double r = 1.0;
  double s = 1.0;
  TailedPoint x1;
  TailedPoint x2;
};

enum class Verdict { Equivalent, Singular };
const char* to_string(Verdict v);

struct DichotomyVerdict {
  Verdict verdict = Verdict::Singular;
  double hellinger = 0.0;
  double log_hellinger = 0.0;  // -inf when the product is 0
  double tail_sum = 0.0;       // sum (x1_i - x2_i)^2 / a_i^2, +inf if divergent
};

// sum_i (x1_i - x2_i)^2 / a_i^2 with a certified tail; throws TailNotCertified.
double weighted_shift_sum(const ShiftedGaussianPair& pair);

double hellinger_product(const ShiftedGaussianPair& pair, double tol = 1e-15);
DichotomyVerdict classify_pair(const ShiftedGaussianPair& pair);

// Density of P_r(. + s e_i) against P_r at y.
double rn_translation(const ProductGaussian& g, int i, double s, const TruncatedPoint& y);
// Product over several coordinate shifts.
double rn_translation(const ProductGaussian& g, const std::vector<std::pair<int, double>>& shifts,
                      const TruncatedPoint& y);

// Both sides of the translation identity for a polynomial g, by exact
// moments: E[p(Y - s e_i)] and E[p(Y) * density(Y)].
std::pair<double, double> rn_translation_sides(const ProductGaussian& g, const RealPoly& p, int i,
                                               double s);

struct Interval {
  int index = 1;
  double lo = 0.0;
  double hi = 0.0;
};
using RectangleEvent = std::vector<Interval>;

double rectangle_probability(const ProductGaussian& g, const RectangleEvent& e);
// (P_{sr}(E), P_r(E / s)).
std::pair<double, double> dilation_check(const ProductGaussian& g, double s, const RectangleEvent& e);

struct FerniqueResult {
  bool finite = true;
  double value = 1.0;
  double threshold = 0.0;  // 1 / (2 r^2 sup a^2)
};

// int exp(c ||x||^exponent) dP_r. exponent 2 is the Gaussian case;
// exponent > 2 with c > 0 always diverges.
FerniqueResult fernique_integral(const ProductGaussian& g, double c, double exponent = 2.0);

using BlackBox = std::function<double(const std::vector<double>&)>;

// Sample mean of f over P_r truncated to stream.dims coordinates.
Estimate mc_integrate(const ProductGaussian& g, const BlackBox& f, const SampleStream& stream, long n);

struct PositivityEstimate {
  double estimate = 0.0;
  double log_estimate = 0.0;
  double std_error = 0.0;
  long hits = 0;
};

// P_r(B(center, radius)) at truncation, by importance sampling from a
// proposal centred on `center`. Log domain because the mass can underflow.
PositivityEstimate positivity_smoke(const ProductGaussian& g, const TruncatedPoint& center,
                                    double radius, const SampleStream& stream, long n);

}  // namespace ell2
