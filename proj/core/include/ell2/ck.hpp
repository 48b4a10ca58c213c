#pragma once

#include <cmath>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ell2/numerics.hpp"
#include "ell2/polynomial.hpp"

namespace ell2 {

// Exponent of t plus a multi-index in x_1, x_2, ...
struct SeriesKey {
  int t = 0;
  MultiIndex x;

  int degree() const { return t + x.degree(); }
  auto operator<=>(const SeriesKey&) const = default;
  bool operator==(const SeriesKey&) const = default;
};

// Finite power series in (t, x) truncated at total degree `cap`. Terms
// dropped by products are tallied in `truncated_mass` (sum of |c|).
template <class T>
class MonomialSeries {
 public:
  using Terms = std::map<SeriesKey, T>;

  MonomialSeries() = default;
  explicit MonomialSeries(int cap) : cap_(cap) {}

  static MonomialSeries constant(T c, int cap) {
    MonomialSeries s(cap);
    s.add({0, {}}, c);
    return s;
  }
  static MonomialSeries x(int i, int cap) {
    MonomialSeries s(cap);
    s.add({0, MultiIndex::unit(i)}, T(1));
    return s;
  }
  static MonomialSeries t_var(int cap) {
    MonomialSeries s(cap);
    s.add({1, {}}, T(1));
    return s;
  }

  int cap() const { return cap_; }
  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  double truncated_mass() const { return mass_; }

  T coeff(const SeriesKey& k) const {
    auto it = t_.find(k);
    return it == t_.end() ? T(0) : it->second;
  }

  void add(const SeriesKey& k, T c) {
    if (c == T(0)) return;
    if (k.degree() > cap_) {
      mass_ += std::abs(static_cast<double>(c));
      return;
    }
    auto it = t_.find(k);
    if (it == t_.end()) {
      t_.emplace(k, c);
    } else {
      it->second += c;
      if (it->second == T(0)) t_.erase(it);
    }
  }

  int degree() const {
    int d = 0;
    for (auto& [k, c] : t_) d = std::max(d, k.degree());
    return d;
  }
  int max_index() const {
    int d = 0;
    for (auto& [k, c] : t_) d = std::max(d, k.x.max_index());
    return d;
  }
  bool depends_on_t() const {
    for (auto& [k, c] : t_)
      if (k.t > 0) return true;
    return false;
  }

  MonomialSeries operator+(const MonomialSeries& o) const {
    MonomialSeries r = *this;
    r.cap_ = std::min(cap_, o.cap_);
    for (auto& [k, c] : o.t_) r.add(k, c);
    return r;
  }
  MonomialSeries operator-(const MonomialSeries& o) const { return *this + o.scaled(T(-1)); }
  MonomialSeries scaled(T s) const {
    MonomialSeries r(cap_);
    for (auto& [k, c] : t_) r.add(k, c * s);
    return r;
  }
  MonomialSeries with_cap(int cap) const {
    MonomialSeries r(cap);
    for (auto& [k, c] : t_) r.add(k, c);
    r.mass_ += mass_;
    return r;
  }
  // Terms involving only x_1..x_n.
  MonomialSeries restricted(int n) const {
    MonomialSeries r(cap_);
    for (auto& [k, c] : t_)
      if (k.x.max_index() <= n) r.t_.emplace(k, c);
    return r;
  }
  // Same coefficients in absolute value.
  MonomialSeries absolute() const {
    MonomialSeries r(cap_);
    for (auto& [k, c] : t_) r.t_.emplace(k, c < T(0) ? T(-c) : c);
    return r;
  }

  MonomialSeries dx(int i) const {
    MonomialSeries r(cap_);
    for (auto& [k, c] : t_) {
      int e = k.x.exponent(i);
      if (e > 0) r.add({k.t, k.x.lowered(i)}, c * T(e));
    }
    return r;
  }
  MonomialSeries dt() const {
    MonomialSeries r(cap_);
    for (auto& [k, c] : t_)
      if (k.t > 0) r.add({k.t - 1, k.x}, c * T(k.t));
    return r;
  }
  // Coefficient of t^k as a series in x alone.
  MonomialSeries t_slice(int k) const {
    MonomialSeries r(cap_);
    for (auto& [key, c] : t_)
      if (key.t == k) r.t_.emplace(SeriesKey{0, key.x}, c);
    return r;
  }
  MonomialSeries times_t_power(int k) const {
    MonomialSeries r(cap_);
    for (auto& [key, c] : t_) r.add({key.t + k, key.x}, c);
    return r;
  }

  bool operator==(const MonomialSeries& o) const { return t_ == o.t_; }

 private:
  int cap_ = 12;
  Terms t_;
  double mass_ = 0.0;
};

// Cauchy product truncated at min(cap_a, cap_b).
template <class T>
MonomialSeries<T> series_product(const MonomialSeries<T>& a, const MonomialSeries<T>& b) {
  MonomialSeries<T> r(std::min(a.cap(), b.cap()));
  for (auto& [ka, ca] : a.terms())
    for (auto& [kb, cb] : b.terms()) r.add({ka.t + kb.t, ka.x + kb.x}, ca * cb);
  return r;
}

// u_t - sum_i A_i d_i u - A_0 u = 0, u(0, x) = Phi(x).
template <class T>
struct LinearCauchyProblem {
  MonomialSeries<T> A0;
  std::vector<std::pair<int, MonomialSeries<T>>> A;  // (i, A_i)
  MonomialSeries<T> Phi;
};

// Taylor coefficients of u up to total degree D, data restricted to x_1..x_n.
template <class T>
MonomialSeries<T> ck_solve(const LinearCauchyProblem<T>& pb, int D, int n) {
  MonomialSeries<T> phi = pb.Phi.restricted(n).with_cap(D);
  MonomialSeries<T> a0 = pb.A0.restricted(n).with_cap(D);
  std::vector<std::pair<int, MonomialSeries<T>>> A;
  for (auto& [i, s] : pb.A)
    if (i >= 1 && i <= n) A.emplace_back(i, s.restricted(n).with_cap(D));

  // Level k of u is the coefficient of t^k, a series in x of degree <= D - k.
  std::vector<MonomialSeries<T>> level;
  level.push_back(phi.t_slice(0));
  int tmax = 0;
  for (auto& [i, s] : A)
    for (auto& [k, c] : s.terms()) tmax = std::max(tmax, k.t);
  for (auto& [k, c] : a0.terms()) tmax = std::max(tmax, k.t);

  for (int k = 0; k < D; ++k) {
    int room = D - k - 1;
    MonomialSeries<T> rhs(room);
    for (int l = 0; l <= std::min(k, tmax); ++l) {
      const MonomialSeries<T>& uk = level[k - l];
      for (auto& [i, s] : A) {
        MonomialSeries<T> ai = s.t_slice(l).with_cap(room);
        rhs = rhs + series_product(ai, uk.dx(i).with_cap(room));
      }
      MonomialSeries<T> b = a0.t_slice(l).with_cap(room);
      rhs = rhs + series_product(b, uk.with_cap(room));
    }
    level.push_back(rhs.scaled(T(1) / T(k + 1)));
  }
  MonomialSeries<T> u(D);
  for (int k = 0; k <= D; ++k)
    for (auto& [key, c] : level[k].terms()) u.add({k, key.x}, c);
  return u;
}

// u_t - sum A_i d_i u - A_0 u, keeping total degree <= D - 1.
template <class T>
MonomialSeries<T> ck_residual(const LinearCauchyProblem<T>& pb, const MonomialSeries<T>& u, int D, int n) {
  int cap = D - 1;
  MonomialSeries<T> r = u.dt().with_cap(cap);
  for (auto& [i, s] : pb.A) {
    if (i < 1 || i > n) continue;
    r = r - series_product(s.restricted(n).with_cap(cap), u.dx(i).with_cap(cap));
  }
  r = r - series_product(pb.A0.restricted(n).with_cap(cap), u.with_cap(cap));
  return r;
}

// u(0, x) - Phi(x) up to degree D.
template <class T>
MonomialSeries<T> ck_initial_mismatch(const LinearCauchyProblem<T>& pb, const MonomialSeries<T>& u, int D, int n) {
  MonomialSeries<T> r = u.t_slice(0).with_cap(D);
  const MonomialSeries<T> phi = pb.Phi.restricted(n);
  for (auto& [k, c] : phi.terms())
    if (k.t == 0) r.add(k, T(-c));
  return r;
}

// Same problem with every coefficient replaced by its absolute value.
template <class T>
LinearCauchyProblem<T> majorant_problem(const LinearCauchyProblem<T>& pb) {
  LinearCauchyProblem<T> m;
  m.A0 = pb.A0.absolute();
  for (auto& [i, s] : pb.A) m.A.emplace_back(i, s.absolute());
  m.Phi = pb.Phi.absolute();
  return m;
}

// rho0 = (sum 1/|v_i|^p)^{-1/p}, s_i = rho0 / |v_i|.
struct MajorantFrame {
  double p = 1.0;
  double rho0 = 0.0;
  std::vector<double> s;               // head
  std::optional<PowerGeometric> tail;  // s_i beyond the head
  double power_sum = 0.0;              // sum s_i^p, tail included

  double at(long i) const;
};

// Throws NotNearInfinity when the gauge is infinite or a coordinate is zero.
MajorantFrame majorant_frame(const TailedPoint& v, double p);

struct Certificate {
  bool entire = false;
  double radius = 0.0;  // converges for |t| < R, |x_i| < R s_i / max_j s_j
  std::vector<double> ratios;
};

// Ratio test on the diagonal sums of the majorant solution over the last
// `window` degrees. Throws RatioTestInconclusive.
Certificate convergence_certificate(const LinearCauchyProblem<double>& pb, const MajorantFrame& frame, int D, int n,
                                    int window = 6);

std::string to_string(const MonomialSeries<double>& s);

}  // namespace ell2
