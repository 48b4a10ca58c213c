#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ell2/numerics.hpp"

namespace ell2 {

// Finitely supported exponent pattern: sorted (index, exponent) pairs,
// exponents >= 1, indices 1-based.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::pair<int, int>> entries);

  static MultiIndex unit(int i, int e = 1);

  const std::vector<std::pair<int, int>>& entries() const { return e_; }
  int exponent(int i) const;
  int degree() const;
  bool empty() const { return e_.empty(); }
  int max_index() const { return e_.empty() ? 0 : e_.back().first; }

  MultiIndex operator+(const MultiIndex& o) const;
  // Lower the exponent of i by one; caller checks exponent(i) > 0.
  MultiIndex lowered(int i) const;
  MultiIndex with_exponent(int i, int e) const;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<std::pair<int, int>> e_;
};

// Sparse real polynomial. T is double or an exact rational type.
template <class T>
class Poly {
 public:
  using Terms = std::map<MultiIndex, T>;

  Poly() = default;
  explicit Poly(T c) {
    if (c != T(0)) t_[MultiIndex{}] = c;
  }

  static Poly constant(T c) { return Poly(c); }
  static Poly var(int i) { return monomial(MultiIndex::unit(i), T(1)); }
  static Poly monomial(const MultiIndex& m, T c) {
    Poly p;
    if (c != T(0)) p.t_[m] = c;
    return p;
  }

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }

  void add_term(const MultiIndex& m, T c) {
    if (c == T(0)) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
      t_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == T(0)) t_.erase(it);
    }
  }

  int degree() const {
    int d = 0;
    for (auto& [m, c] : t_) d = std::max(d, m.degree());
    return d;
  }
  std::set<int> support() const {
    std::set<int> s;
    for (auto& [m, c] : t_)
      for (auto& [i, e] : m.entries()) s.insert(i);
    return s;
  }
  int max_index() const {
    int k = 0;
    for (auto& [m, c] : t_) k = std::max(k, m.max_index());
    return k;
  }

  Poly operator+(const Poly& o) const {
    Poly r = *this;
    for (auto& [m, c] : o.t_) r.add_term(m, c);
    return r;
  }
  Poly operator-(const Poly& o) const {
    Poly r = *this;
    for (auto& [m, c] : o.t_) r.add_term(m, -c);
    return r;
  }
  Poly operator-() const { return scaled(T(-1)); }
  Poly operator*(const Poly& o) const {
    Poly r;
    for (auto& [m1, c1] : t_)
      for (auto& [m2, c2] : o.t_) r.add_term(m1 + m2, c1 * c2);
    return r;
  }
  Poly scaled(T s) const {
    Poly r;
    if (s == T(0)) return r;
    for (auto& [m, c] : t_) r.t_.emplace(m, c * s);
    return r;
  }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly derivative(int i) const {
    Poly r;
    for (auto& [m, c] : t_) {
      int e = m.exponent(i);
      if (e > 0) r.add_term(m.lowered(i), c * T(e));
    }
    return r;
  }
  Poly times_var(int i) const {
    Poly r;
    for (auto& [m, c] : t_) r.add_term(m + MultiIndex::unit(i), c);
    return r;
  }
  // p(x + s e_i), expanded.
  Poly shifted(int i, T s) const {
    Poly r;
    for (auto& [m, c] : t_) {
      int e = m.exponent(i);
      if (e == 0) {
        r.add_term(m, c);
        continue;
      }
      // (x+s)^e = sum_k C(e,k) x^k s^(e-k)
      T binom(1);
      T spow(1);
      std::vector<T> sp(e + 1);
      for (int k = 0; k <= e; ++k) {
        sp[k] = spow;
        spow *= s;
      }
      for (int k = e; k >= 0; --k) {
        r.add_term(m.with_exponent(i, k), c * binom * sp[e - k]);
        binom = binom * T(k) / T(e - k + 1);
      }
    }
    return r;
  }
  // Drop every term that involves a variable with index > n.
  Poly restricted(int n) const {
    Poly r;
    for (auto& [m, c] : t_)
      if (m.max_index() <= n) r.t_.emplace(m, c);
    return r;
  }

  double evaluate(const std::vector<double>& x) const {
    double s = 0;
    for (auto& [m, c] : t_) {
      double v = to_double(c);
      for (auto& [i, e] : m.entries()) {
        double xi = (i >= 1 && static_cast<std::size_t>(i) <= x.size()) ? x[i - 1] : 0.0;
        v *= ipow(xi, e);
      }
      s += v;
    }
    return s;
  }

  // Expectation under independent centred Gaussians with variance var(i).
  template <class VarFn>
  T integrate(VarFn&& var) const {
    T s(0);
    for (auto& [m, c] : t_) {
      T v = c;
      for (auto& [i, e] : m.entries()) {
        if (e % 2) {
          v = T(0);
          break;
        }
        v *= moment_from_variance(e, T(var(i)));
      }
      s += v;
    }
    return s;
  }

  bool operator==(const Poly& o) const { return t_ == o.t_; }

  static T moment_from_variance(int k, T var) {
    if (k % 2) return T(0);
    T r(1);
    for (int j = k - 1; j > 1; j -= 2) r *= T(j);
    for (int j = 0; j < k / 2; ++j) r *= var;
    return r;
  }

 private:
  static double ipow(double x, int e) {
    double r = 1;
    while (e-- > 0) r *= x;
    return r;
  }
  static double to_double(const T& c) { return static_cast<double>(c); }

  Terms t_;
};

using RealPoly = Poly<double>;

// Exact expectation of p under P_r with coordinate std dev r * a_i.
double integrate_polynomial(const RealPoly& p, const WeightSequence& w, double r);

// E[p(Y - s e_i)] under P_r.
double integrate_shifted(const RealPoly& p, const WeightSequence& w, double r, int i, double s);

// E[p(Y) exp(lambda Y_i)] under P_r, by tilted moments.
double integrate_tilted(const RealPoly& p, const WeightSequence& w, double r, int i, double lambda);

// Gaussian adjoint of D_i: -D_i p + x_i p / a_i^2.
RealPoly adjoint_derivative(const RealPoly& p, int i, const WeightSequence& w);

std::string to_string(const RealPoly& p);

}  // namespace ell2
