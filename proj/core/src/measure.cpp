#include "ell2/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ell2 {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Tail of x1 - x2 beyond both heads, if it stays in the closed-form family.
PowerGeometric difference_tail(const TailedPoint& x1, const TailedPoint& x2) {
  PowerGeometric t1 = x1.tail.value_or(PowerGeometric::zero());
  PowerGeometric t2 = x2.tail.value_or(PowerGeometric::zero());
  if (t1.is_zero()) return t2;
  if (t2.is_zero()) return t1;
  if (t1.ratio == t2.ratio && t1.exponent == t2.exponent) return {t1.scale - t2.scale, t1.ratio, t1.exponent};
  throw Error(ErrorKind::TailNotCertified, "shift tails are not in a common closed-form family");
}
}  // namespace

std::vector<double> ProductGaussian::sds(int dims) const {
  std::vector<double> s(dims);
  for (int i = 0; i < dims; ++i) s[i] = sd(i + 1);
  return s;
}

double hellinger_1d(double a, double r, double s, double x1, double x2) {
  double rs = r * r + s * s;
  double d = x1 - x2;
  return std::sqrt(2.0 * r * s / rs) * std::exp(-d * d / (4.0 * rs * a * a));
}

const char* to_string(Verdict v) { return v == Verdict::Equivalent ? "Equivalent" : "Singular"; }

double weighted_shift_sum(const ShiftedGaussianPair& pair) {
  long h = static_cast<long>(std::max(pair.x1.head.size(), pair.x2.head.size()));
  PowerGeometric dt = difference_tail(pair.x1, pair.x2);
  double s = 0.0;
  for (long i = 1; i <= h; ++i) {
    double d = pair.x1.at(i) - pair.x2.at(i);
    double a = pair.weights.a(i);
    s += d * d / (a * a);
  }
  if (dt.is_zero()) return s;
  long wn = static_cast<long>(pair.weights.size());
  for (long i = h + 1; i <= wn; ++i) {
    double d = dt.term(i);
    double a = pair.weights.a(i);
    s += d * d / (a * a);
  }
  if (!pair.weights.has_tail())
    throw Error(ErrorKind::TailNotCertified, "weights have no tail rule for a nonzero shift tail");
  PowerGeometric fam = dt.pow(2.0).times(pair.weights.tail()->pow(-2.0));
  return s + fam.sum_from(std::max(h, wn) + 1);
}

double hellinger_product(const ShiftedGaussianPair& pair, double /*tol*/) {
  // r != s: every factor is at most sqrt(2rs/(r^2+s^2)) < 1, so the
  // infinite product is 0 regardless of the shifts.
  if (pair.r != pair.s) return 0.0;
  double S = weighted_shift_sum(pair);
  if (std::isinf(S)) return 0.0;
  return std::exp(-S / (8.0 * pair.r * pair.r));
}

DichotomyVerdict classify_pair(const ShiftedGaussianPair& pair) {
  DichotomyVerdict v;
  double S;
  try {
    S = weighted_shift_sum(pair);
  } catch (const Error&) {
    if (pair.r != pair.s) {
      S = kInf;  // unknown, but irrelevant for the verdict
    } else {
      throw;
    }
  }
  v.tail_sum = S;
  if (pair.r == pair.s && std::isfinite(S)) {
    v.verdict = Verdict::Equivalent;
    v.log_hellinger = -S / (8.0 * pair.r * pair.r);
    v.hellinger = std::exp(v.log_hellinger);
  } else {
    v.verdict = Verdict::Singular;
    v.log_hellinger = -kInf;
    v.hellinger = 0.0;
  }
  return v;
}

double rn_translation(const ProductGaussian& g, int i, double s, const TruncatedPoint& y) {
  double sd = g.sd(i);
  return std::exp(-(2.0 * s * y.at(i) + s * s) / (2.0 * sd * sd));
}

double rn_translation(const ProductGaussian& g, const std::vector<std::pair<int, double>>& shifts,
                      const TruncatedPoint& y) {
  double lg = 0.0;
  for (auto& [i, s] : shifts) {
    double sd = g.sd(i);
    lg += -(2.0 * s * y.at(i) + s * s) / (2.0 * sd * sd);
  }
  return std::exp(lg);
}

std::pair<double, double> rn_translation_sides(const ProductGaussian& g, const RealPoly& p, int i,
                                               double s) {
  double lhs = integrate_shifted(p, g.weights, g.r, i, s);
  double sd = g.sd(i);
  double v = sd * sd;
  // density = exp(lambda y_i) * exp(-s^2 / (2 v)), lambda = -s / v
  double rhs = std::exp(-s * s / (2.0 * v)) * integrate_tilted(p, g.weights, g.r, i, -s / v);
  return {lhs, rhs};
}

double rectangle_probability(const ProductGaussian& g, const RectangleEvent& e) {
  double p = 1.0;
  for (auto& iv : e) {
    if (!(iv.hi > iv.lo)) return 0.0;
    double sd = g.sd(iv.index);
    p *= normal_cdf(iv.hi / sd) - normal_cdf(iv.lo / sd);
  }
  return p;
}

std::pair<double, double> dilation_check(const ProductGaussian& g, double s, const RectangleEvent& e) {
  ProductGaussian gs{g.weights, s * g.r};
  RectangleEvent scaled = e;
  for (auto& iv : scaled) {
    iv.lo /= s;
    iv.hi /= s;
  }
  return {rectangle_probability(gs, e), rectangle_probability(g, scaled)};
}

FerniqueResult fernique_integral(const ProductGaussian& g, double c, double exponent) {
  FerniqueResult res;
  double sup = g.weights.sup();
  res.threshold = 1.0 / (2.0 * g.r * g.r * sup * sup);
  if (c == 0.0) {
    res.value = 1.0;
    return res;
  }
  if (exponent > 2.0 && c > 0.0) {
    res.finite = false;
    res.value = kInf;
    return res;
  }
  if (c >= res.threshold) {
    res.finite = false;
    res.value = kInf;
    return res;
  }
  double k2 = 2.0 * g.r * g.r * c;
  double lg = 0.0;
  long n = static_cast<long>(g.weights.size());
  for (long i = 1; i <= n; ++i) {
    double a = g.weights.a(i);
    lg += -0.5 * std::log1p(-k2 * a * a);
  }
  if (g.weights.has_tail()) {
    long i = n + 1;
    for (; i < n + 100000; ++i) {
      double a = g.weights.a(i);
      double x = k2 * a * a;
      if (std::abs(x) < 1e-15) break;
      lg += -0.5 * std::log1p(-x);
    }
    // Remaining factors are 1 + x/2 + O(x^2) with |x| < 1e-15.
    lg += 0.5 * k2 * g.weights.tail()->pow(2.0).sum_from(i);
  }
  res.value = std::exp(lg);
  return res;
}

Estimate mc_integrate(const ProductGaussian& g, const BlackBox& f, const SampleStream& stream, long n) {
  std::vector<double> sd = g.sds(stream.dims);
  return mc_mean(stream, n, [&](Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> x(sd.size());
    for (std::size_t j = 0; j < sd.size(); ++j) x[j] = sd[j] * nd(rng);
    double v = f(x);
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteSample, "integrand returned a non-finite value");
    return v;
  });
}

PositivityEstimate positivity_smoke(const ProductGaussian& g, const TruncatedPoint& center,
                                    double radius, const SampleStream& stream, long n) {
  PositivityEstimate out;
  if (!(radius > 0.0) || n <= 0) {
    out.log_estimate = -kInf;
    return out;
  }
  int d = std::max<int>(stream.dims, static_cast<int>(center.size()));
  std::vector<double> sd = g.sds(d);
  std::vector<double> tau(d);
  double cap = radius / (2.0 * std::sqrt(static_cast<double>(d)));
  for (int j = 0; j < d; ++j) tau[j] = std::min(sd[j], cap);

  // Per-sample log weight, or -inf outside the ball.
  std::vector<double> lw(n, -kInf);
  long cs = std::max(1, stream.chunk_size);
  long chunks = (n + cs - 1) / cs;
  parallel_chunks(chunks, [&](long c) {
    Rng rng(chunk_seed(stream.seed, static_cast<std::uint64_t>(c)));
    std::normal_distribution<double> nd(0.0, 1.0);
    long begin = c * cs, end = std::min(n, begin + cs);
    for (long s = begin; s < end; ++s) {
      double dist2 = 0.0, l = 0.0;
      for (int j = 0; j < d; ++j) {
        double z = nd(rng);
        double x = center.at(j + 1) + tau[j] * z;
        double dx = x - center.at(j + 1);
        dist2 += dx * dx;
        double u = x / sd[j];
        l += -0.5 * u * u - std::log(sd[j]) + 0.5 * z * z + std::log(tau[j]);
      }
      if (dist2 < radius * radius) lw[s] = l;
    }
  });
  double m = -kInf;
  for (double l : lw) m = std::max(m, l);
  if (!std::isfinite(m)) {
    out.log_estimate = -kInf;
    return out;
  }
  double s1 = 0.0, s2 = 0.0;
  for (double l : lw) {
    if (!std::isfinite(l)) continue;
    double v = std::exp(l - m);
    s1 += v;
    s2 += v * v;
    ++out.hits;
  }
  double mean = s1 / n;
  double var = std::max(0.0, s2 / n - mean * mean);
  out.log_estimate = m + std::log(mean);
  out.estimate = std::exp(out.log_estimate);
  out.std_error = std::exp(m) * std::sqrt(var / std::max<long>(1, n - 1));
  return out;
}

}  // namespace ell2
