#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ell2/cutoff.hpp"
#include "ell2/numerics.hpp"
#include "ell2/polynomial.hpp"
#include "ell2/sampling.hpp"

namespace ell2 {

using cplx = std::complex<double>;

// z^p zbar^q pattern: sorted (index, p, q) triples with p + q >= 1.
class CMono {
 public:
  CMono() = default;
  explicit CMono(std::vector<std::array<int, 3>> e);

  static CMono z(int j, int p = 1) { return CMono({{j, p, 0}}); }
  static CMono zbar(int j, int q = 1) { return CMono({{j, 0, q}}); }

  const std::vector<std::array<int, 3>>& entries() const { return e_; }
  std::pair<int, int> exponents(int j) const;
  int degree() const;
  int max_index() const { return e_.empty() ? 0 : e_.back()[0]; }
  CMono with(int j, int p, int q) const;
  CMono operator*(const CMono& o) const;
  CMono conjugate() const;

  auto operator<=>(const CMono&) const = default;
  bool operator==(const CMono&) const = default;

 private:
  std::vector<std::array<int, 3>> e_;
};

// Sparse polynomial in z_j, zbar_j with complex coefficients.
class CPoly {
 public:
  using Terms = std::map<CMono, cplx>;

  CPoly() = default;
  explicit CPoly(cplx c) { add(CMono{}, c); }
  static CPoly monomial(const CMono& m, cplx c = 1.0) {
    CPoly p;
    p.add(m, c);
    return p;
  }

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int degree() const;
  int max_index() const;
  double max_abs_coeff() const;

  void add(const CMono& m, cplx c);
  CPoly operator+(const CPoly& o) const;
  CPoly operator-(const CPoly& o) const;
  CPoly operator*(const CPoly& o) const;
  CPoly scaled(cplx s) const;
  CPoly& operator+=(const CPoly& o) { return *this = *this + o; }

  CPoly d(int j) const;     // d/dz_j
  CPoly dbar(int j) const;  // d/dzbar_j
  CPoly times_z(int j) const;
  CPoly times_zbar(int j) const;
  CPoly conjugate() const;
  // Drop terms with |coefficient| <= tol.
  CPoly pruned(double tol) const;

  cplx evaluate(const std::vector<cplx>& z) const;

 private:
  Terms t_;
};

// E[z^m zbar^n] = delta_{mn} m! (2 r^2 a^2)^m, multiplied over coordinates.
cplx expectation(const CPoly& p, const WeightSequence& w, double r);
// int f conj(g) dP_r.
cplx inner(const CPoly& f, const CPoly& g, const WeightSequence& w, double r);

// delta_j p = d_j p - zbar_j p / (2 r^2 a_j^2).
CPoly delta_j(const CPoly& p, int j, const WeightSequence& w, double r);
// Conjugate operator: dbar_j p - z_j p / (2 r^2 a_j^2).
CPoly delta_bar_j(const CPoly& p, int j, const WeightSequence& w, double r);

using IndexList = std::vector<int>;
using FormKey = std::pair<IndexList, IndexList>;

// Sum' f_{I,J} dz_I ^ dzbar_J with strictly increasing I, J.
struct Form {
  int s = 0;
  int t = 0;
  std::map<FormKey, CPoly> terms;

  Form() = default;
  Form(int s_, int t_) : s(s_), t(t_) {}

  // Adds to an existing component. Throws MalformedBlock on bad keys.
  void add(const IndexList& I, const IndexList& J, const CPoly& p);
  bool is_zero() const;
  double max_abs_coeff() const;
  int degree() const;
  int max_index() const;
  Form operator-(const Form& o) const;
  Form pruned(double tol) const;
};

// Sign of the permutation taking (j, J) to K; 0 unless K = {j} u J, j not in J.
int epsilon(const IndexList& K, int j, const IndexList& J);

// a^{I,J} = prod a_i^2 prod a_j^2.
double weight_IJ(const IndexList& I, const IndexList& J, const WeightSequence& w);

// (Sf)_{I,K} = (-1)^s sum eps^K_{j,J} dbar_j f_{I,J}.
Form apply_S(const Form& f);
// (T* f)_{I,J} = (-1)^{s-1} sum_j a_j^2 delta_j (eps f)_{I,jJ}.
Form apply_Tstar(const Form& f, const WeightSequence& w, double r);

cplx form_inner(const Form& f, const Form& g, const WeightSequence& w, double r);
double form_norm2(const Form& f, const WeightSequence& w, double r);

struct BasicEstimate {
  double lhs = 0.0;  // (t+1)/(2r^2) ||f||^2, f an (s, t+1)-form
  double rhs = 0.0;  // ||T* f||^2 + ||S f||^2
};
BasicEstimate basic_estimate_check(const Form& f, const WeightSequence& w, double r);

// Conditional expectation onto the first n coordinates.
CPoly reduce_dimension(const CPoly& p, int n, const WeightSequence& w, double r);
RealPoly reduce_dimension(const RealPoly& p, int n, const WeightSequence& w, double r);

// f_{n,delta}(x) = int f(P_n x - y) psi_delta(y) dy with a radial C^inf bump on
// the first n coordinates, by Monte Carlo.
Estimate mollify(const BlackBox& f, const std::vector<double>& x, int n, double delta, const SampleStream& stream,
                 long samples);

struct DbarSolution {
  Form u;
  double norm_ratio = 0.0;  // ||u|| / ||f||
  double residual = 0.0;    // ||T u - f|| / ||f||
  double bound = 0.0;       // sqrt(2 r^2 / (t+1))
  long basis_size = 0;
};

// Least-norm u with Tu = f over forms of degree <= cap in the first n
// coordinates. Throws NotClosed or BasisTooSmall.
DbarSolution solve_dbar(const Form& f, const WeightSequence& w, double r, int cap, int n);

struct MultiplierReport {
  std::vector<double> residual;   // |(T(Xf), g) - (X Tf + TX ^ f, g)| per test form
  std::vector<double> std_error;  // complex standard error per test form
  double max_ratio = 0.0;         // max residual / std_error
  double tx_term = 0.0;           // max |(TX ^ f, g)| over the test forms
};

// Weak form of T(X f) = X T f + (T X) ^ f with X the likelihood-ratio cut-off
// X_k of `cut`, whose real coordinates are (x_1, y_1, x_2, y_2, ...).
MultiplierReport multiplier_identity_check(const Form& f, const std::vector<Form>& tests, const CutoffSystem& cut,
                                           int k, const WeightSequence& w, double r, int n,
                                           const SampleStream& stream, long samples);

std::string to_string(const CPoly& p);
std::string to_string(const Form& f);

}  // namespace ell2
