#include "ell2/cutoff.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>

namespace ell2 {

namespace {
constexpr double kLo = 1.0 / 16.0;
constexpr double kHi = 9.0 / 16.0;
}  // namespace

double bump_profile(double t) {
  if (t <= kLo || t >= kHi) return 0.0;
  return std::exp(1.0 / ((t - kLo) * (t - kHi)));
}

Smoothstep::Smoothstep() {
  cum_.assign(kPanels + 1, 0.0);
  double step = (kHi - kLo) / kPanels;
  for (int k = 0; k < kPanels; ++k) {
    double a = kLo + k * step;
    cum_[k + 1] = cum_[k] + gauss_legendre(bump_profile, a, a + step);
  }
  mass_ = cum_[kPanels];

  // |H'(x)| = 2x h(x^2) / mass on (1/4, 3/4): grid, then Brent.
  auto neg = [&](double x) { return -2.0 * x * bump_profile(x * x) / mass_; };
  double best = 0.5;
  for (int k = 1; k < 1000; ++k) {
    double x = 0.25 + 0.5 * k / 1000.0;
    if (neg(x) < neg(best)) best = x;
  }
  auto r = boost::math::tools::brent_find_minima(neg, best - 5e-4, best + 5e-4, 52);
  sup_dh_ = -r.second;
}

const Smoothstep& Smoothstep::instance() {
  static const Smoothstep s;
  return s;
}

double Smoothstep::cumulative(double t) const {
  if (t <= kLo) return 0.0;
  if (t >= kHi) return mass_;
  double step = (kHi - kLo) / kPanels;
  int k = std::min(kPanels - 1, static_cast<int>((t - kLo) / step));
  double a = kLo + k * step;
  return cum_[k] + gauss_legendre(bump_profile, a, t);
}

double Smoothstep::H(double x) const { return cumulative(x * x) / mass_; }

double Smoothstep::dH(double x) const { return 2.0 * x * bump_profile(x * x) / mass_; }

double separating_bump(const TruncatedPoint& center, double r1, double r2, const TruncatedPoint& x) {
  if (!(r2 > r1) || r1 < 0.0) throw Error(ErrorKind::ConditionViolated, "separating_bump needs 0 <= r1 < r2");
  long n = static_cast<long>(std::max(center.size(), x.size()));
  double d2 = 0.0;
  for (long i = 1; i <= n; ++i) {
    double d = x.at(i) - center.at(i);
    d2 += d * d;
  }
  double u = std::clamp((std::sqrt(d2) - r1) / (r2 - r1), 0.0, 1.0);
  return 1.0 - Smoothstep::instance().H(0.25 + 0.5 * u);
}

CutoffSystem::CutoffSystem(const CutoffConfig& cfg) : d_(cfg.dims), n_(cfg.samples) {
  if (d_ < 1 || n_ < 2) throw Error(ErrorKind::ConfigError, "cutoff system needs dims >= 1 and samples >= 2");
  a_.resize(d_);
  c_.resize(d_);
  for (int i = 0; i < d_; ++i) {
    a_[i] = cfg.weights.a(i + 1);
    c_[i] = std::sqrt(a_[i]);
  }
  y_ = gaussian_samples(cfg.stream, n_, a_);
  ynorm_.resize(n_);
  for (long s = 0; s < n_; ++s) {
    double q = 0.0;
    for (int i = 0; i < d_; ++i) q += y_[s * d_ + i] * y_[s * d_ + i] / c_[i];
    ynorm_[s] = q;
  }
  for (int n = 1;; ++n) {
    double p = fraction_in_K(n);
    double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_));
    if (p > 0.8 + 5.0 * se) {
      n1_ = n;
      calib_frac_ = p;
      break;
    }
    if (n > 100000) throw Error(ErrorKind::ConditionViolated, "no K_n reaches P_1 mass 0.8");
  }
}

double CutoffSystem::norm_c2(const std::vector<double>& x) const {
  double q = 0.0;
  for (int i = 0; i < d_ && i < static_cast<int>(x.size()); ++i) q += x[i] * x[i] / c_[i];
  return q;
}

bool CutoffSystem::in_K(double n, const std::vector<double>& x) const { return norm_c2(x) <= n * n; }

double CutoffSystem::fraction_in_K(double n) const {
  long hits = std::count_if(ynorm_.begin(), ynorm_.end(), [&](double q) { return q <= n * n; });
  return static_cast<double>(hits) / static_cast<double>(n_);
}

Estimate CutoffSystem::g(int n, const std::vector<double>& x) const {
  double n2 = static_cast<double>(n) * n;
  long hits = 0;
  for (long s = 0; s < n_; ++s) {
    const double* y = &y_[s * d_];
    double q = 0.0;
    for (int i = 0; i < d_; ++i) {
      double v = (i < static_cast<int>(x.size()) ? x[i] : 0.0) - y[i];
      q += v * v / c_[i];
    }
    if (q <= n2) ++hits;
  }
  Estimate e;
  e.n = n_;
  e.mean = static_cast<double>(hits) / static_cast<double>(n_);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(n_ - 1));
  return e;
}

double CutoffSystem::X(int k, const std::vector<double>& x) const {
  return Smoothstep::instance().H(g(k + n1_, x).mean);
}

std::vector<Estimate> CutoffSystem::grad_g(int n, const std::vector<double>& x) const {
  double n2 = static_cast<double>(n) * n;
  std::vector<double> s1(d_, 0.0), s2(d_, 0.0);
  for (long s = 0; s < n_; ++s) {
    const double* y = &y_[s * d_];
    double q = 0.0;
    for (int i = 0; i < d_; ++i) {
      double v = (i < static_cast<int>(x.size()) ? x[i] : 0.0) - y[i];
      q += v * v / c_[i];
    }
    if (q > n2) continue;
    for (int i = 0; i < d_; ++i) {
      double t = -y[i] / (a_[i] * a_[i]);
      s1[i] += t;
      s2[i] += t * t;
    }
  }
  std::vector<Estimate> out(d_);
  double N = static_cast<double>(n_);
  for (int i = 0; i < d_; ++i) {
    double m = s1[i] / N;
    double var = std::max(0.0, (s2[i] - N * m * m) / (N - 1.0));
    out[i] = {m, std::sqrt(var / N), n_};
  }
  return out;
}

CutoffSystem::GradientBound CutoffSystem::gradient_bound(int k, const std::vector<double>& x) const {
  int n = k + n1_;
  double hp = Smoothstep::instance().dH(g(n, x).mean);
  auto d = grad_g(n, x);
  double s = 0.0, v = 0.0;
  for (int i = 0; i < d_; ++i) {
    double w = a_[i] * a_[i];
    s += w * d[i].mean * d[i].mean;
    double dd = 2.0 * w * d[i].mean * d[i].std_error;
    v += dd * dd;
  }
  return {hp * hp * s, hp * hp * std::sqrt(v)};
}

double CutoffSystem::g_smooth(int n, const std::vector<double>& x, int i) const {
  double n2 = static_cast<double>(n) * n;
  int j = i - 1;
  double xi = j < static_cast<int>(x.size()) ? x[j] : 0.0;
  double acc = 0.0;
  for (long s = 0; s < n_; ++s) {
    const double* y = &y_[s * d_];
    double r = 0.0;
    for (int l = 0; l < d_; ++l) {
      if (l == j) continue;
      double v = (l < static_cast<int>(x.size()) ? x[l] : 0.0) - y[l];
      r += v * v / c_[l];
    }
    if (r >= n2) continue;
    double w = std::sqrt(c_[j] * (n2 - r));
    acc += normal_cdf((xi + w) / a_[j]) - normal_cdf((xi - w) / a_[j]);
  }
  return acc / static_cast<double>(n_);
}

double CutoffSystem::dg_smooth(int n, const std::vector<double>& x, int i) const {
  double n2 = static_cast<double>(n) * n;
  int j = i - 1;
  double xi = j < static_cast<int>(x.size()) ? x[j] : 0.0;
  double acc = 0.0;
  for (long s = 0; s < n_; ++s) {
    const double* y = &y_[s * d_];
    double r = 0.0;
    for (int l = 0; l < d_; ++l) {
      if (l == j) continue;
      double v = (l < static_cast<int>(x.size()) ? x[l] : 0.0) - y[l];
      r += v * v / c_[l];
    }
    if (r >= n2) continue;
    double w = std::sqrt(c_[j] * (n2 - r));
    acc += (normal_pdf((xi + w) / a_[j]) - normal_pdf((xi - w) / a_[j])) / a_[j];
  }
  return acc / static_cast<double>(n_);
}

// Self-normalised: sum_in w / sum_all w, so g_lr is exactly 1 once every
// sample lies in K_n and the gradient then vanishes.
double CutoffSystem::g_lr(int n, const std::vector<double>& x) const {
  double n2 = static_cast<double>(n) * n;
  double in = 0.0, all = 0.0;
  for (long s = 0; s < n_; ++s) {
    double w = lr_weight(s, x);
    all += w;
    if (ynorm_[s] <= n2) in += w;
  }
  return in / all;
}

std::vector<double> CutoffSystem::grad_g_lr(int n, const std::vector<double>& x) const {
  double n2 = static_cast<double>(n) * n;
  double in = 0.0, all = 0.0;
  std::vector<double> din(d_, 0.0), dall(d_, 0.0);
  for (long s = 0; s < n_; ++s) {
    const double* u = &y_[s * d_];
    double w = lr_weight(s, x);
    bool inside = ynorm_[s] <= n2;
    all += w;
    if (inside) in += w;
    for (int i = 0; i < d_; ++i) {
      double xi = i < static_cast<int>(x.size()) ? x[i] : 0.0;
      double dw = w * (u[i] - xi) / (a_[i] * a_[i]);
      dall[i] += dw;
      if (inside) din[i] += dw;
    }
  }
  std::vector<double> out(d_);
  for (int i = 0; i < d_; ++i) out[i] = (din[i] * all - in * dall[i]) / (all * all);
  return out;
}

double CutoffSystem::lr_weight(long s, const std::vector<double>& x) const {
  const double* u = &y_[s * d_];
  double l = 0.0;
  for (int i = 0; i < d_ && i < static_cast<int>(x.size()); ++i)
    l += (2.0 * x[i] * u[i] - x[i] * x[i]) / (2.0 * a_[i] * a_[i]);
  return std::exp(l);
}

double CutoffSystem::X_lr(int k, const std::vector<double>& x) const {
  return Smoothstep::instance().H(g_lr(k + n1_, x));
}

std::vector<double> CutoffSystem::grad_X_lr(int k, const std::vector<double>& x) const {
  int n = k + n1_;
  double hp = Smoothstep::instance().dH(g_lr(n, x));
  auto gr = grad_g_lr(n, x);
  for (double& v : gr) v *= hp;
  return gr;
}

namespace {
std::vector<double> padded(const std::vector<double>& x, int d) {
  std::vector<double> p(d, 0.0);
  for (int i = 0; i < d && i < static_cast<int>(x.size()); ++i) p[i] = x[i];
  return p;
}
}  // namespace

Estimate heat_smooth(const WeightSequence& w, const BlackBox& f, double t, const std::vector<double>& x,
                     const SampleStream& stream, long n) {
  int d = stream.dims;
  std::vector<double> sd(d);
  for (int i = 0; i < d; ++i) sd[i] = t * w.a(i + 1);
  std::vector<double> x0 = padded(x, d);
  return mc_mean(stream, n, [&](Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> z(d);
    for (int i = 0; i < d; ++i) z[i] = x0[i] - sd[i] * nd(rng);
    double v = f(z);
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteSample, "integrand returned a non-finite value");
    return v;
  });
}

Estimate heat_partial(const WeightSequence& w, const BlackBox& f, double t, const std::vector<double>& x,
                      int i, const SampleStream& stream, long n) {
  int d = stream.dims;
  if (i < 1 || i > d) throw Error(ErrorKind::ConfigError, "heat_partial index outside the truncation");
  std::vector<double> sd(d);
  for (int l = 0; l < d; ++l) sd[l] = t * w.a(l + 1);
  std::vector<double> x0 = padded(x, d);
  double ai = w.a(i);
  return mc_mean(stream, n, [&](Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> z(d);
    double yi = 0.0;
    for (int l = 0; l < d; ++l) {
      double y = sd[l] * nd(rng);
      if (l == i - 1) yi = y;
      z[l] = x0[l] - y;
    }
    double v = f(z);
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteSample, "integrand returned a non-finite value");
    return -v * yi / (t * t * ai * ai);
  });
}

DiscontinuityResult discontinuity_demo(const WeightSequence& w, int n, const SampleStream& stream,
                                       long samples) {
  DiscontinuityResult r;
  int d = stream.dims;
  std::vector<double> xn(d), x0(d), sd(d);
  for (int m = 1; m <= d; ++m) {
    double a = w.a(m);
    sd[m - 1] = a;
    x0[m - 1] = std::sqrt(a);
    xn[m - 1] = (m <= n || m % 2 == 1) ? std::sqrt(a) : -std::sqrt(a);
  }
  // Beyond n the sign is (-1)^{m+1}, so infinitely many factors are
  // Phi(-1/sqrt(a_m)) -> 0.
  r.fxn_limit = 0.0;
  double lt = 0.0;
  for (int m = 1; m <= d; ++m) lt += std::log(normal_cdf(xn[m - 1] / sd[m - 1]));
  r.fxn_truncated = std::exp(lt);

  double l0 = 0.0;
  for (long m = 1; m < 100000; ++m) {
    double q = normal_cdf(-1.0 / std::sqrt(w.a(m)));
    if (q < 1e-18) break;
    l0 += std::log1p(-q);
  }
  r.fx0 = std::exp(l0);

  auto orthant = [&](const std::vector<double>& x) {
    return mc_mean(stream, samples, [&](Rng& rng) {
      std::normal_distribution<double> nd(0.0, 1.0);
      double in = 1.0;
      for (int m = 0; m < d; ++m)
        if (!(sd[m] * nd(rng) < x[m])) in = 0.0;
      return in;
    });
  };
  r.fxn_mc = orthant(xn);
  r.fx0_mc = orthant(x0);
  return r;
}

}  // namespace ell2
