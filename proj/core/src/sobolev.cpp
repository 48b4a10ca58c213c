#include "ell2/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "ell2/errors.hpp"

namespace ell2 {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Fn = std::function<double(double)>;

double quad(double lo, double hi, const Fn& f, int panels = 4) {
  if (!(hi > lo)) return 0.0;
  return gauss_legendre_composite(f, lo, hi, panels);
}

double log_gauss_density(const std::vector<double>& x, const WeightSequence& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double a = w.a(static_cast<long>(i) + 1);
    s += -0.5 * x[i] * x[i] / (a * a) - std::log(a) - 0.5 * std::log(2.0 * kPi);
  }
  return s;
}

double half_moment(int m, double s) {
  return std::pow(s, m) * std::pow(2.0, 0.5 * m - 1.0) * std::tgamma(0.5 * (m + 1)) / std::sqrt(kPi);
}

double halfspace_expect(const RealPoly& p, const WeightSequence& w, int k) {
  double s = 0.0;
  for (auto& [mi, c] : p.terms()) {
    double v = c;
    for (auto& [i, e] : mi.entries()) {
      if (i == k) continue;
      v *= RealPoly::moment_from_variance(e, w.a(i) * w.a(i));
    }
    s += v * half_moment(mi.exponent(k), w.a(k));
  }
  return s;
}

// int_{|x - c| < R} F dP over the first d coordinates, polar about c.
double ball_integral(const std::function<double(const std::vector<double>&)>& F, const WeightSequence& w,
                     const std::vector<double>& center, double R, int d) {
  auto pt = [&](const std::vector<double>& off) {
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) x[i] = (i < static_cast<int>(center.size()) ? center[i] : 0.0) + off[i];
    return F(x) * std::exp(log_gauss_density(x, w));
  };
  switch (d) {
    case 1:
      return quad(-R, R, [&](double r) { return pt({r}); }, 8);
    case 2:
      return quad(0.0, R, [&](double r) {
        return r * quad(0.0, 2 * kPi, [&](double th) { return pt({r * std::cos(th), r * std::sin(th)}); }, 4);
      });
    case 3:
      return quad(0.0, R, [&](double r) {
        return r * r * quad(-1.0, 1.0, [&](double c) {
          double s = std::sqrt(std::max(0.0, 1.0 - c * c));
          return quad(0.0, 2 * kPi, [&](double ph) { return pt({r * c, r * s * std::cos(ph), r * s * std::sin(ph)}); },
                      2);
        }, 2);
      });
    default:
      throw Error(ErrorKind::ConfigError, "ball quadrature supports at most 3 coordinates");
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_upto(const std::vector<int>& vars, int m) {
  std::vector<MultiIndex> out;
  std::function<void(std::size_t, int, MultiIndex)> rec = [&](std::size_t pos, int left, MultiIndex cur) {
    if (pos == vars.size()) {
      if (!cur.empty()) out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) rec(pos + 1, left - e, e ? cur.with_exponent(vars[pos], e) : cur);
  };
  rec(0, m, MultiIndex{});
  return out;
}

RealPoly derivative(const RealPoly& p, const MultiIndex& alpha) {
  RealPoly r = p;
  for (auto& [i, e] : alpha.entries())
    for (int k = 0; k < e; ++k) r = r.derivative(i);
  return r;
}

double sobolev_norm(const RealPoly& f, int m, const WeightSequence& w, const std::optional<GaussGreenDomain>& domain) {
  std::vector<int> vars;
  for (int i : f.support()) vars.push_back(i);
  std::vector<std::pair<double, RealPoly>> parts{{1.0, f}};
  for (auto& alpha : multi_indices_upto(vars, m)) {
    double wt = 1.0;
    for (auto& [i, e] : alpha.entries()) wt *= std::pow(w.a(i), 2 * e);
    RealPoly d = derivative(f, alpha);
    if (!d.is_zero()) parts.emplace_back(wt, d);
  }

  double s = 0.0;
  if (!domain) {
    for (auto& [wt, p] : parts) s += wt * integrate_polynomial(p * p, w, 1.0);
  } else if (domain->kind == DomainKind::HalfSpace) {
    for (auto& [wt, p] : parts) s += wt * halfspace_expect(p * p, w, domain->k);
  } else {
    int d = domain->dims;
    if (f.max_index() > d) throw Error(ErrorKind::ConfigError, "f depends on coordinates beyond the ball's");
    s = ball_integral(
        [&](const std::vector<double>& x) {
          double v = 0.0;
          for (auto& [wt, p] : parts) {
            double q = p.evaluate(x);
            v += wt * q * q;
          }
          return v;
        },
        w, domain->center, domain->radius, d);
  }
  return std::sqrt(s);
}

double weak_derivative_defect(const RealPoly& f, int i, const std::vector<RealPoly>& tests, const WeightSequence& w) {
  RealPoly df = f.derivative(i);
  double worst = 0.0;
  for (auto& phi : tests) {
    double lhs = integrate_polynomial(df * phi, w, 1.0);
    double rhs = integrate_polynomial(f * adjoint_derivative(phi, i, w), w, 1.0);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

TranslationSides translation_identity_check(const RealPoly& f, double t, const WeightSequence& w) {
  RealPoly f2 = f * f;
  double a2 = w.a(1) * w.a(1);
  TranslationSides s;
  s.lhs = integrate_polynomial(f2.shifted(1, t), w, 1.0);
  s.rhs = std::exp(-t * t / (2 * a2)) * integrate_tilted(f2, w, 1.0, 1, t / a2);
  return s;
}

UnboundednessRow translation_unboundedness_demo(int n, double a1) {
  double a2 = a1 * a1;
  auto F = [a2](double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    double q = x * (1 - x);
    double f = std::exp(-1.0 / q);
    double df = f * (1 - 2 * x) / (q * q);
    return f * f + a2 * df * df;
  };
  // log int_0^1 F(x) exp(-(x - s)^2 / (2 a^2)) dx
  auto logI = [&](double s) {
    double xm = std::clamp(s, 0.0, 1.0);
    double m = -(xm - s) * (xm - s) / (2 * a2);
    double v = quad(0.0, 1.0, [&](double x) { return F(x) * std::exp(-(x - s) * (x - s) / (2 * a2) - m); }, 64);
    return m + std::log(v);
  };
  UnboundednessRow row;
  row.n = n;
  row.ratio = std::exp(0.5 * (logI(n + 1.0) - logI(static_cast<double>(n))));
  row.lower = std::exp(-1.0 / (4 * a2) - n / (2 * a2));
  row.upper = std::exp(1.0 / (4 * a2) - n / (2 * a2));
  return row;
}

double SphereChart::delta() const {
  double a2 = w.a(1) * w.a(1);
  double rest = w.power_sum(2.0) - a2;
  return std::max({1.0 / 3.0, 4.0 / 3.0, 1.0, 2.0, 8.0, 64.0 * a2 / 9.0 + rest / 9.0});
}

double SphereChart::C1() const {
  double d = delta(), a2 = w.a(1) * w.a(1);
  return std::exp(-d * d / a2) / d;
}

double SphereChart::C2() const {
  double d = delta();
  return d * std::exp(d * d);
}

double SphereChart::C() const {
  double d = delta(), a2 = w.a(1) * w.a(1), c2 = C2();
  return std::max(std::sqrt(2 * c2 * (1 + d * d + d * d * d / a2)), std::sqrt(2 * c2 * (1 + d / a2)));
}

std::vector<double> SphereChart::psi(const std::vector<double>& x) {
  std::vector<double> r = x;
  r[0] = g(x);
  return r;
}

std::vector<double> SphereChart::tau(const std::vector<double>& xh) {
  std::vector<double> r = xh;
  r[0] = h(xh);
  return r;
}

double SphereChart::g(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s) - 1.0;
}

double SphereChart::h(const std::vector<double>& xh) {
  double s = (xh[0] + 1) * (xh[0] + 1);
  for (std::size_t i = 1; i < xh.size(); ++i) s -= xh[i] * xh[i];
  return std::sqrt(s);
}

double SphereChart::D1g(const std::vector<double>& x) { return x[0] / (g(x) + 1.0); }

double SphereChart::D1h(const std::vector<double>& xh) { return (xh[0] + 1) / h(xh); }

double SphereChart::Dih(const std::vector<double>& xh, int i) {
  if (i == 1) return D1h(xh);
  return -xh[i - 1] / h(xh);
}

double SphereChart::J(const std::vector<double>& xh) const {
  double a2 = w.a(1) * w.a(1), hv = h(xh);
  return std::abs(D1h(xh)) * std::exp((xh[0] * xh[0] - hv * hv) / (2 * a2));
}

double SphereChart::J1(const std::vector<double>& x) const {
  double a2 = w.a(1) * w.a(1), gv = g(x);
  return std::abs(D1g(x)) * std::exp((x[0] * x[0] - gv * gv) / (2 * a2));
}

ChartSampleReport chart_sample_check(const SphereChart& c, int dims, long points, const SampleStream& stream) {
  if (dims < 1) throw Error(ErrorKind::ConfigError, "chart check needs at least one coordinate");
  const double del = c.delta();
  ChartSampleReport rep;
  rep.points = points;
  rep.J_min = rep.J1_min = std::numeric_limits<double>::infinity();
  rep.J_max = rep.J1_max = -std::numeric_limits<double>::infinity();
  Rng rng(chunk_seed(stream.seed, 0));
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud;
  std::vector<double> x(dims);
  for (long p = 0; p < points; ++p) {
    // uniform in B(e_1, radius)
    double nn = 0.0;
    for (auto& v : x) {
      v = nd(rng);
      nn += v * v;
    }
    double rad = c.radius * std::pow(ud(rng), 1.0 / dims) / std::sqrt(nn);
    for (auto& v : x) v *= rad;
    x[0] += 1.0;

    std::vector<double> xh = SphereChart::psi(x);
    double d1h = SphereChart::D1h(xh), d1g = SphereChart::D1g(x);
    double grad = 0.0;
    for (int i = 1; i <= dims; ++i) {
      double a = c.w.a(i), di = SphereChart::Dih(xh, i);
      grad += a * a * di * di;
    }
    bool ok = std::abs(xh[0]) < del && std::abs(x[0]) < del && SphereChart::h(xh) < del &&
              std::abs(SphereChart::g(x)) < del && d1h > 1 / del && d1h < del && d1g > 1 / del && d1g < del &&
              grad < del;
    if (!ok) {
      rep.condition_holds = false;
      throw Error(ErrorKind::ConditionViolated, "chart bounds fail at a sampled point");
    }
    rep.max_product_defect = std::max(rep.max_product_defect, std::abs(std::abs(d1h) * std::abs(d1g) - 1.0));
    double j = c.J(xh), j1 = c.J1(x);
    rep.J_min = std::min(rep.J_min, j);
    rep.J_max = std::max(rep.J_max, j);
    rep.J1_min = std::min(rep.J1_min, j1);
    rep.J1_max = std::max(rep.J1_max, j1);
  }
  return rep;
}

namespace {

// int_{U_0 n O} F dP, polar about the origin; O = { |x| > 1 }.
// x = rho omega, omega_1 = cos(theta), rho in (1, c + sqrt(c^2 - 8/9)).
double chart_direct(const SphereChart& ch, const std::function<double(const std::vector<double>&)>& F, int d) {
  const double r2 = ch.radius * ch.radius;
  const double cmin = (2.0 - r2) / 2.0;  // rho_+ (cmin) = 1
  auto rho_hi = [&](double c) { return c + std::sqrt(std::max(0.0, c * c - (1.0 - r2))); };
  auto dens = [&](const std::vector<double>& x) { return F(x) * std::exp(log_gauss_density(x, ch.w)); };
  if (d == 2) {
    double thm = std::acos(cmin);
    return quad(-thm, thm, [&](double th) {
      double c = std::cos(th), s = std::sin(th);
      return quad(1.0, rho_hi(c), [&](double r) { return r * dens({r * c, r * s}); }, 2);
    }, 4);
  }
  if (d == 3) {
    return quad(cmin, 1.0, [&](double c) {
      double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      return quad(1.0, rho_hi(c), [&](double r) {
        return r * r * quad(0.0, 2 * kPi, [&](double ph) {
          return dens({r * c, r * s * std::cos(ph), r * s * std::sin(ph)});
        }, 2);
      }, 2);
    }, 4);
  }
  throw Error(ErrorKind::ConfigError, "chart quadrature supports 2 or 3 coordinates");
}

// int_{psi(U_0) n H} G dP with xh = (u, y), u in (0, r), |y| < q(u),
// u = r - v^2 to absorb the square-root edge.
double chart_flat(const SphereChart& ch, const std::function<double(const std::vector<double>&)>& G, int d) {
  const double r = ch.radius, r2 = r * r;
  auto qmax = [&](double u) {
    double s = (1 + u) * (1 + u);
    double t = s + 1.0 - r2;
    return std::sqrt(std::max(0.0, s - t * t / 4.0));
  };
  auto dens = [&](const std::vector<double>& x) { return G(x) * std::exp(log_gauss_density(x, ch.w)); };
  return quad(0.0, std::sqrt(r), [&](double v) {
    double u = r - v * v, q = qmax(u), jac = 2 * v;
    if (d == 2) return jac * quad(-q, q, [&](double y) { return dens({u, y}); }, 2);
    if (d == 3)
      return jac * quad(0.0, q, [&](double rr) {
        return rr * quad(0.0, 2 * kPi, [&](double ph) { return dens({u, rr * std::cos(ph), rr * std::sin(ph)}); }, 2);
      }, 2);
    throw Error(ErrorKind::ConfigError, "chart quadrature supports 2 or 3 coordinates");
  }, 4);
}

}  // namespace

ChartMeasureSides chart_measure_identity(const SphereChart& c, const BlackBox& F, int dims) {
  ChartMeasureSides s;
  s.direct = chart_direct(c, F, dims);
  s.pulled = chart_flat(c, [&](const std::vector<double>& xh) { return F(SphereChart::tau(xh)) * c.J(xh); }, dims);
  return s;
}

NormEquivalence chart_norm_equivalence(const SphereChart& c, const RealPoly& f, int dims) {
  if (f.max_index() > dims) throw Error(ErrorKind::ConfigError, "f depends on coordinates beyond the chart's");
  std::vector<RealPoly> df;
  for (int i = 1; i <= dims; ++i) df.push_back(f.derivative(i));

  double n_direct = chart_direct(c, [&](const std::vector<double>& x) {
    double v = f.evaluate(x);
    double s = v * v;
    for (int i = 1; i <= dims; ++i) {
      double a = c.w.a(i), d = df[i - 1].evaluate(x);
      s += a * a * d * d;
    }
    return s;
  }, dims);

  double n_flat = chart_flat(c, [&](const std::vector<double>& xh) {
    std::vector<double> x = SphereChart::tau(xh);
    double v = f.evaluate(x);
    double d1 = df[0].evaluate(x);
    double s = v * v;
    for (int i = 1; i <= dims; ++i) {
      double a = c.w.a(i);
      double d = (i == 1 ? 0.0 : df[i - 1].evaluate(x)) + d1 * SphereChart::Dih(xh, i);
      s += a * a * d * d;
    }
    return s;
  }, dims);

  NormEquivalence r;
  r.C = c.C();
  double nf = std::sqrt(n_direct);
  r.lhs = nf / r.C;
  r.mid = std::sqrt(n_flat);
  r.rhs = r.C * nf;
  return r;
}

std::vector<Estimate> cutoff_stability(const RealPoly& f, const CutoffSystem& cut, int kmax,
                                       const SampleStream& stream, long samples) {
  const int d = cut.dims();
  if (f.max_index() > d) throw Error(ErrorKind::ConfigError, "f depends on coordinates beyond the cut-off's");
  std::vector<RealPoly> df;
  for (int i = 1; i <= d; ++i) df.push_back(f.derivative(i));
  const auto& a = cut.a();

  auto sq = mc_mean(stream, samples, kmax, [&](Rng& rng, double* out) {
    std::normal_distribution<double> nd;
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) x[i] = a[i] * nd(rng);
    double fv = f.evaluate(x);
    std::vector<double> dfv(d);
    for (int i = 0; i < d; ++i) dfv[i] = df[i].evaluate(x);
    for (int k = 1; k <= kmax; ++k) {
      double X = cut.X_lr(k, x);
      std::vector<double> gX = cut.grad_X_lr(k, x);
      double s = (1 - X) * (1 - X) * fv * fv;
      for (int i = 0; i < d; ++i) {
        double di = gX[i] * fv + (X - 1) * dfv[i];
        s += a[i] * a[i] * di * di;
      }
      out[k - 1] = s;
    }
  });
  std::vector<Estimate> out;
  for (auto& e : sq) {
    double m = std::sqrt(std::max(0.0, e.mean));
    out.push_back({m, m > 0 ? e.std_error / (2 * m) : std::sqrt(e.std_error), e.n});
  }
  return out;
}

}  // namespace ell2
