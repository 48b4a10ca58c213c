#include "ell2/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "ell2/polynomial.hpp"

namespace ell2 {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::TailNotCertified: return "TailNotCertified";
    case ErrorKind::ZeroCoordinate: return "ZeroCoordinate";
    case ErrorKind::NonFiniteSample: return "NonFiniteSample";
    case ErrorKind::MalformedBlock: return "MalformedBlock";
    case ErrorKind::TailDivergent: return "TailDivergent";
    case ErrorKind::LocalFinitenessViolated: return "LocalFinitenessViolated";
    case ErrorKind::ChartMismatch: return "ChartMismatch";
    case ErrorKind::UnsupportedCodimension: return "UnsupportedCodimension";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::BasisTooSmall: return "BasisTooSmall";
    case ErrorKind::NotNearInfinity: return "NotNearInfinity";
    case ErrorKind::RatioTestInconclusive: return "RatioTestInconclusive";
    case ErrorKind::ConditionViolated: return "ConditionViolated";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool ratio_is_one(double r) { return std::abs(r - 1.0) < 1e-14; }
}  // namespace

// ---- PowerGeometric ----

double PowerGeometric::term(long i) const {
  if (scale == 0.0) return 0.0;
  double di = static_cast<double>(i);
  return scale * std::pow(ratio, di) * (exponent == 0.0 ? 1.0 : std::pow(di, exponent));
}

PowerGeometric PowerGeometric::pow(double q) const {
  if (scale == 0.0) {
    if (q <= 0) throw Error(ErrorKind::ZeroCoordinate, "negative power of a zero tail");
    return zero();
  }
  return {std::pow(std::abs(scale), q), std::pow(ratio, q), exponent * q};
}

PowerGeometric PowerGeometric::times(const PowerGeometric& o) const {
  if (scale == 0.0 || o.scale == 0.0) return zero();
  return {scale * o.scale, ratio * o.ratio, exponent + o.exponent};
}

bool PowerGeometric::summable() const {
  if (scale == 0.0) return true;
  if (ratio_is_one(ratio)) return exponent < -1.0;
  return ratio < 1.0;
}

double PowerGeometric::sum_from(long m) const {
  if (scale == 0.0) return 0.0;
  m = std::max<long>(m, 1);
  if (!summable()) return kInf;
  double s = std::abs(scale);
  if (ratio_is_one(ratio)) {
    double e = -exponent;
    // zeta(e) - sum_{i<m} i^{-e}; for large m the direct tail is more
    // accurate than a difference of nearly equal numbers.
    if (m > 64) {
      double acc = 0.0;
      long i = m;
      for (; i < m + 200000; ++i) {
        double t = std::pow(static_cast<double>(i), -e);
        acc += t;
        if (t < 1e-18 * acc) break;
      }
      // Integral bound for what is left.
      acc += std::pow(static_cast<double>(i), 1.0 - e) / (e - 1.0);
      return s * acc;
    }
    double partial = 0.0;
    for (long i = 1; i < m; ++i) partial += std::pow(static_cast<double>(i), -e);
    return s * (std::riemann_zeta(e) - partial);
  }
  if (exponent == 0.0) return s * std::pow(ratio, static_cast<double>(m)) / (1.0 - ratio);
  // ratio < 1 with a power factor: sum directly past the peak.
  double peak = exponent > 0 ? exponent / -std::log(ratio) : 0.0;
  double acc = 0.0;
  for (long i = m; i < m + 1000000; ++i) {
    double t = term(i) / scale;
    acc += t;
    if (static_cast<double>(i) > peak && t < 1e-18 * std::max(acc, 1e-300)) break;
  }
  return s * acc;
}

double PowerGeometric::sup_from(long m) const {
  if (scale == 0.0) return 0.0;
  m = std::max<long>(m, 1);
  double s = std::abs(scale);
  bool decreasing = (ratio < 1.0 && exponent <= 0.0) || (ratio_is_one(ratio) && exponent <= 0.0);
  if (decreasing) return std::abs(term(m));
  if (ratio > 1.0 || (ratio_is_one(ratio) && exponent > 0.0)) return kInf;
  // ratio < 1, exponent > 0: single interior peak.
  double peak = exponent / -std::log(ratio);
  long lo = std::max<long>(m, static_cast<long>(std::floor(peak)));
  return s * std::max(std::abs(term(lo) / scale), std::abs(term(lo + 1) / scale));
}

// ---- WeightSequence ----

WeightSequence::WeightSequence(std::vector<double> head, std::optional<PowerGeometric> tail)
    : head_(std::move(head)), tail_(tail) {
  for (double a : head_)
    if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::ConfigError, "weights must be positive and finite");
  if (tail_ && (tail_->scale <= 0.0 || !tail_->summable()))
    throw Error(ErrorKind::TailNotCertified, "weight tail must be positive and summable");
}

WeightSequence WeightSequence::geometric(std::size_t n, double ratio) {
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = std::pow(ratio, static_cast<double>(i + 1));
  return WeightSequence(std::move(h), PowerGeometric::geometric(1.0, ratio));
}

double WeightSequence::a(long i) const {
  if (i >= 1 && static_cast<std::size_t>(i) <= head_.size()) return head_[i - 1];
  if (!tail_) throw Error(ErrorKind::TailNotCertified, "weight index beyond explicit head without tail rule");
  return tail_->term(i);
}

double WeightSequence::tail_power_sum(double p) const {
  if (!tail_) throw Error(ErrorKind::TailNotCertified, "no weight tail rule");
  return tail_->pow(p).sum_from(static_cast<long>(head_.size()) + 1);
}

double WeightSequence::power_sum(double p) const {
  double s = 0.0;
  for (double a : head_) s += std::pow(a, p);
  return s + tail_power_sum(p);
}

double WeightSequence::sup() const {
  double m = 0.0;
  for (double a : head_) m = std::max(m, a);
  if (tail_) m = std::max(m, tail_->sup_from(static_cast<long>(head_.size()) + 1));
  return m;
}

WeightSequence WeightSequence::truncated(std::size_t n) const {
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = a(static_cast<long>(i) + 1);
  return WeightSequence(std::move(h), tail_);
}

// ---- points ----

double TruncatedPoint::norm2() const {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double TailedPoint::at(long i) const {
  if (i >= 1 && static_cast<std::size_t>(i) <= head.size()) return head[i - 1];
  return tail ? tail->term(i) : 0.0;
}

// ---- scalar helpers ----

double double_factorial(int n) {
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

double gaussian_moment(int k, double sigma) {
  if (k < 0) throw Error(ErrorKind::ConfigError, "negative moment order");
  if (k % 2) return 0.0;
  return double_factorial(k - 1) * std::pow(sigma, k);
}

double dp_distance(const TruncatedPoint& x, const TruncatedPoint& y, double p) {
  std::size_t n = std::max(x.size(), y.size());
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 1; i <= n; ++i) m = std::max(m, std::abs(x.at(i) - y.at(i)));
    return std::min(1.0, m);
  }
  if (!(p > 0.0)) throw Error(ErrorKind::ConfigError, "p must be positive");
  double s = 0.0;
  for (std::size_t i = 1; i <= n; ++i) s += std::pow(std::abs(x.at(i) - y.at(i)), p);
  return std::min(1.0, std::pow(s, 1.0 / std::max(1.0, p)));
}

double near_infinity_gauge(const TailedPoint& v, double p) {
  double s = 0.0;
  for (double c : v.head) {
    if (c == 0.0) throw Error(ErrorKind::ZeroCoordinate, "coordinate is zero");
    s += std::pow(std::abs(c), -p);
  }
  if (!v.tail) throw Error(ErrorKind::TailNotCertified, "point has no tail rule");
  if (v.tail->is_zero()) throw Error(ErrorKind::ZeroCoordinate, "tail coordinates are zero");
  return s + v.tail->pow(-p).sum_from(static_cast<long>(v.head.size()) + 1);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

double gauss_legendre(const std::function<double(double)>& f, double lo, double hi) {
  return boost::math::quadrature::gauss<double, 32>::integrate(f, lo, hi);
}

double gauss_legendre_composite(const std::function<double(double)>& f, double lo, double hi,
                                int panels) {
  panels = std::max(1, panels);
  double h = (hi - lo) / panels;
  std::vector<double> parts(panels);
  for (int k = 0; k < panels; ++k) parts[k] = gauss_legendre(f, lo + k * h, lo + (k + 1) * h);
  return pairwise_sum(parts.data(), parts.size());
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

// ---- polynomial support ----

MultiIndex::MultiIndex(std::vector<std::pair<int, int>> entries) {
  std::sort(entries.begin(), entries.end());
  for (auto& [i, e] : entries) {
    if (e < 0 || i < 1) throw Error(ErrorKind::ConfigError, "bad multi-index entry");
    if (e == 0) continue;
    if (!e_.empty() && e_.back().first == i)
      e_.back().second += e;
    else
      e_.emplace_back(i, e);
  }
}

MultiIndex MultiIndex::unit(int i, int e) { return MultiIndex({{i, e}}); }

int MultiIndex::exponent(int i) const {
  for (auto& [k, e] : e_)
    if (k == i) return e;
  return 0;
}

int MultiIndex::degree() const {
  int d = 0;
  for (auto& [k, e] : e_) d += e;
  return d;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  MultiIndex r;
  r.e_.reserve(e_.size() + o.e_.size());
  std::size_t a = 0, b = 0;
  while (a < e_.size() || b < o.e_.size()) {
    if (b == o.e_.size() || (a < e_.size() && e_[a].first < o.e_[b].first)) {
      r.e_.push_back(e_[a++]);
    } else if (a == e_.size() || o.e_[b].first < e_[a].first) {
      r.e_.push_back(o.e_[b++]);
    } else {
      r.e_.emplace_back(e_[a].first, e_[a].second + o.e_[b].second);
      ++a;
      ++b;
    }
  }
  return r;
}

MultiIndex MultiIndex::lowered(int i) const { return with_exponent(i, exponent(i) - 1); }

MultiIndex MultiIndex::with_exponent(int i, int e) const {
  MultiIndex r;
  bool placed = false;
  for (auto& [k, x] : e_) {
    if (k == i) {
      if (e > 0) r.e_.emplace_back(k, e);
      placed = true;
    } else {
      if (!placed && k > i) {
        if (e > 0) r.e_.emplace_back(i, e);
        placed = true;
      }
      r.e_.emplace_back(k, x);
    }
  }
  if (!placed && e > 0) r.e_.emplace_back(i, e);
  return r;
}

double integrate_polynomial(const RealPoly& p, const WeightSequence& w, double r) {
  return p.integrate([&](int i) {
    double s = r * w.a(i);
    return s * s;
  });
}

double integrate_shifted(const RealPoly& p, const WeightSequence& w, double r, int i, double s) {
  return integrate_polynomial(p.shifted(i, -s), w, r);
}

double integrate_tilted(const RealPoly& p, const WeightSequence& w, double r, int i, double lambda) {
  // E[Y^k e^{lY}] = e^{l^2 v/2} sum_j C(k,j) (l v)^{k-j} E[Z^j], Z ~ N(0, v).
  double sd = r * w.a(i);
  double v = sd * sd;
  double norm = std::exp(0.5 * lambda * lambda * v);
  double total = 0.0;
  for (auto& [m, c] : p.terms()) {
    double rest = c;
    int k = 0;
    for (auto& [j, e] : m.entries()) {
      if (j == i) {
        k = e;
        continue;
      }
      if (e % 2) {
        rest = 0.0;
        break;
      }
      double sj = r * w.a(j);
      rest *= gaussian_moment(e, sj);
    }
    if (rest == 0.0) continue;
    double tilted = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
      if (j % 2 == 0) tilted += binom * std::pow(lambda * v, k - j) * gaussian_moment(j, sd);
      binom = binom * (k - j) / (j + 1);
    }
    total += rest * tilted;
  }
  return norm * total;
}

RealPoly adjoint_derivative(const RealPoly& p, int i, const WeightSequence& w) {
  double a = w.a(i);
  return p.times_var(i).scaled(1.0 / (a * a)) - p.derivative(i);
}

std::string to_string(const RealPoly& p) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (auto& [m, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (auto& [i, e] : m.entries()) {
      os << "*x" << i;
      if (e > 1) os << "^" << e;
    }
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace ell2
