#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ell2/measure.hpp"
#include "ell2/numerics.hpp"
#include "ell2/polynomial.hpp"
#include "ell2/sampling.hpp"

namespace ell2 {

// Subset of the positive integers: a periodic membership mask with finitely
// many toggled exceptions. Covers finite, co-finite, evens, odds and their
// finite modifications.
class IndexSet {
 public:
  IndexSet() : mask_{false} {}

  static IndexSet finite(std::vector<long> members);
  static IndexSet cofinite(std::vector<long> excluded);
  // i is a member iff mask[(i-1) % period] differs from "i is toggled".
  static IndexSet periodic(std::vector<bool> mask, std::vector<long> toggled = {});
  static IndexSet evens() { return periodic({false, true}); }
  static IndexSet odds() { return periodic({true, false}); }

  bool contains(long i) const;
  bool is_finite() const;
  long period() const { return static_cast<long>(mask_.size()); }
  // Largest toggled index, 0 if none.
  long horizon() const { return toggled_.empty() ? 0 : toggled_.back(); }
  std::vector<long> elements_upto(long n) const;

  // |*this \ other|, or nullopt when infinite.
  std::optional<long> difference_size(const IndexSet& other) const;
  // Elements of *this \ other; throws ConditionViolated when infinite.
  std::vector<long> difference(const IndexSet& other) const;

  IndexSet with_toggled(long i) const;

 private:
  std::vector<bool> mask_;
  std::vector<long> toggled_;  // sorted, unique
};

bool index_equivalent(const IndexSet& a, const IndexSet& b);

// T : P_{I1} -> P_{I2}, identity on (I1 n I2) \ I0. The block holds (T e_c, e_r)
// for c in cols = I0 u (I1 \ I2), r in rows = I0 u (I2 \ I1), row-major.
class FinitePerturbationMap {
 public:
  FinitePerturbationMap() = default;
  // Throws MalformedBlock when the shape or the identity condition is off.
  FinitePerturbationMap(IndexSet domain, IndexSet codomain, std::vector<long> exceptional,
                        std::vector<double> block);

  static FinitePerturbationMap identity(const IndexSet& s) { return {s, s, {}, {}}; }

  const IndexSet& domain() const { return dom_; }
  const IndexSet& codomain() const { return cod_; }
  const std::vector<long>& exceptional() const { return i0_; }
  const std::vector<long>& rows() const { return rows_; }
  const std::vector<long>& cols() const { return cols_; }
  const std::vector<double>& block() const { return block_; }

  // (T e_col, e_row) for col in the domain.
  double entry(long row, long col) const;
  std::map<long, double> apply(const std::map<long, double>& x) const;

 private:
  IndexSet dom_, cod_;
  std::vector<long> i0_, rows_, cols_;
  std::vector<double> block_;
};

// Determinant of the block after I0 is widened to every shared index up to
// the largest index the block touches. Multiplicative under composition.
double det_F(const FinitePerturbationMap& t);
// The block exactly as declared. Its sign depends on the choice of I0.
double det_F_declared(const FinitePerturbationMap& t);

FinitePerturbationMap compose(const FinitePerturbationMap& t2, const FinitePerturbationMap& t1);
// T^{-1} : P_{I2} -> P_{I1}. Throws MalformedBlock when the block is singular.
FinitePerturbationMap inverse(const FinitePerturbationMap& t);

// Affine graph over finitely many base coordinates at truncation:
// x_J = b + A x_I, A of shape |J| x |I| row-major.
struct GraphSurface {
  std::vector<long> base;  // I
  std::vector<long> comp;  // J
  std::vector<double> offset;
  std::vector<double> slope;

  std::vector<double> graph(const std::vector<double>& xI) const;
  // Ambient point (1-based coordinates up to the largest index used).
  std::vector<double> embed(const std::vector<double>& xI) const;
};

// sqrt(1 + sum of squared minors of A) = sqrt(det(1 + A^T A)).
double n_I(const GraphSurface& s);
// Same quantity by explicit enumeration of all square minors.
double n_I_minors(const GraphSurface& s);

// prod_{i in I} exp(-x_i^2 / (2 a_i^2)) / sqrt(2 pi a_i^2) over the members
// of I; members beyond `truncation` take x_i = 0 and are summed in the log.
double F_weight(const WeightSequence& w, const IndexSet& I, const TruncatedPoint& x, long truncation);

// Rectangle in base coordinates; unlisted base coordinates are unconstrained.
using ChartRegion = std::vector<Interval>;

// int_region n_I F_J(b + A x_I) dmu_I(x_I). Tensor Gauss-Legendre over the
// coordinates that matter (at most 3), Monte Carlo otherwise.
double surface_measure(const GraphSurface& s, const WeightSequence& w, const ChartRegion& region,
                       const SampleStream& stream, long mc_samples = 200000);

// S = { x_I + x0_J + x_1 dx_J } with I the odd and J the even coordinates up
// to `dims`.
struct LineBundle {
  int dims = 8;
  std::vector<double> x0;  // per even coordinate 2, 4, ...
  std::vector<double> dx;

  std::vector<long> evens() const;
  GraphSurface chart_I() const;
  // Chart over (I \ {1}) u {j}, j even.
  GraphSurface chart_j(long j) const;
  // D(P_{I_j} P_I^{-1}) as a finite perturbation of the index sets.
  FinitePerturbationMap chart_change(long j) const;
  FinitePerturbationMap chart_change_inverse(long j) const;
  double n_closed() const;
};

// Measure of { x in S : lo < x_1 < hi } through chart I and through chart j.
std::pair<double, double> chart_consistency(const LineBundle& b, const WeightSequence& w, long j, double lo,
                                            double hi);

enum class DomainKind { HalfSpace, Ball };

// HalfSpace: { x_k > 0 }. Ball: { |x - center| < radius }. Both at truncation `dims`.
struct GaussGreenDomain {
  DomainKind kind = DomainKind::HalfSpace;
  int dims = 2;
  int k = 1;
  std::vector<double> center;
  double radius = 1.0;
};

struct GaussGreenResult {
  double lhs = 0.0;       // int_V D_i f dP
  double volume = 0.0;    // int_V x_i f / a_i^2 dP
  double boundary = 0.0;  // int_dV f nu_i dmu
  double residual = 0.0;  // lhs - volume - boundary
  double std_error = 0.0;
};

// Half-space with polynomial f: every term by exact truncated moments.
GaussGreenResult gauss_green_exact(const WeightSequence& w, const GaussGreenDomain& v, const RealPoly& f,
                                   int i);

// Volume terms by Monte Carlo (shared samples); boundary exact for the
// half-space and by angular-Gaussian importance sampling for the ball.
GaussGreenResult gauss_green_check(const WeightSequence& w, const GaussGreenDomain& v, const RealPoly& f,
                                   int i, const SampleStream& stream, long n);
GaussGreenResult gauss_green_check(const WeightSequence& w, const GaussGreenDomain& v, const BlackBox& f,
                                   const BlackBox& dif, int i, const SampleStream& stream, long n);

// Flat piece S = { x_J = b, x_K in V } of co-dimension |J| <= 2 in at most 4
// truncated dimensions; V a half-space or ball in the K coordinates.
struct StokesScene {
  int dims = 2;
  std::vector<long> comp;      // J
  std::vector<double> offset;  // b
  GaussGreenDomain region;     // over K, coordinates renumbered 1..|K|
};

struct StokesResult {
  double surface = 0.0;   // int_S delta_i f dmu_S
  double boundary = 0.0;  // int_dS f nu_i dmu_dS
  double residual = 0.0;
};

// Both sides by tensor Gauss-Legendre quadrature. i is a K coordinate (1-based within K).
StokesResult stokes_check(const WeightSequence& w, const StokesScene& s, const RealPoly& f, int i);

}  // namespace ell2
