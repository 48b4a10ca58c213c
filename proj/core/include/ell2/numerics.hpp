#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ell2/errors.hpp"

namespace ell2 {

// t_i = scale * ratio^i * i^exponent for i >= 1.
// Closed under positive/negative powers and pointwise products, which is
// all the tail bookkeeping ever needs.
struct PowerGeometric {
  double scale = 0.0;
  double ratio = 1.0;
  double exponent = 0.0;

  static PowerGeometric zero() { return {}; }
  static PowerGeometric geometric(double scale, double ratio) { return {scale, ratio, 0.0}; }
  static PowerGeometric power(double scale, double exponent) { return {scale, 1.0, exponent}; }

  bool is_zero() const { return scale == 0.0; }
  double term(long i) const;
  PowerGeometric pow(double q) const;
  PowerGeometric times(const PowerGeometric& o) const;
  PowerGeometric scaled(double c) const { return {scale * c, ratio, exponent}; }
  bool summable() const;
  // sum_{i >= m} |t_i|; +inf when the series diverges.
  double sum_from(long m) const;
  // sup_{i >= m} |t_i|; +inf when unbounded.
  double sup_from(long m) const;
};

// Positive summable weights a_1..a_n with an optional closed-form tail.
class WeightSequence {
 public:
  WeightSequence() = default;
  WeightSequence(std::vector<double> head, std::optional<PowerGeometric> tail);

  // a_i = ratio^i for i <= n, same rule beyond.
  static WeightSequence geometric(std::size_t n, double ratio = 0.5);

  std::size_t size() const { return head_.size(); }
  const std::vector<double>& head() const { return head_; }
  const std::optional<PowerGeometric>& tail() const { return tail_; }
  bool has_tail() const { return tail_.has_value(); }

  // 1-based. Beyond the head the tail rule is used; throws TailNotCertified
  // if there is none.
  double a(long i) const;
  double operator[](long i) const { return a(i); }

  // sum_{i > size()} a_i^p by closed form.
  double tail_power_sum(double p) const;
  // sum_{i >= 1} a_i^p.
  double power_sum(double p) const;
  // sup_i a_i over head and tail.
  double sup() const;

  WeightSequence truncated(std::size_t n) const;

 private:
  std::vector<double> head_;
  std::optional<PowerGeometric> tail_;
};

// Finitely many explicit coordinates; zeros beyond.
struct TruncatedPoint {
  std::vector<double> x;

  TruncatedPoint() = default;
  explicit TruncatedPoint(std::vector<double> c) : x(std::move(c)) {}
  std::size_t size() const { return x.size(); }
  double at(long i) const { return (i >= 1 && static_cast<std::size_t>(i) <= x.size()) ? x[i - 1] : 0.0; }
  double norm2() const;
};

// A point whose coordinates beyond the head follow a closed-form rule.
struct TailedPoint {
  std::vector<double> head;
  std::optional<PowerGeometric> tail;

  double at(long i) const;
};

double gaussian_moment(int k, double sigma);
double double_factorial(int n);

double dp_distance(const TruncatedPoint& x, const TruncatedPoint& y, double p);

// sum_i 1/|v_i|^p with the tail in closed form.
double near_infinity_gauge(const TailedPoint& v, double p);

double normal_cdf(double x);
double normal_pdf(double x);

// Fixed 32-point Gauss-Legendre rule on [lo, hi].
double gauss_legendre(const std::function<double(double)>& f, double lo, double hi);

// Composite rule: `panels` equal sub-intervals, 32 points each.
double gauss_legendre_composite(const std::function<double(double)>& f, double lo, double hi,
                                int panels);

// Order-preserving pairwise sum.
double pairwise_sum(const double* v, std::size_t n);

}  // namespace ell2
