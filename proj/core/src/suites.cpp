#include "suites.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "ell2/ck.hpp"
#include "ell2/cutoff.hpp"
#include "ell2/dbar.hpp"
#include "ell2/errors.hpp"
#include "ell2/measure.hpp"
#include "ell2/sobolev.hpp"
#include "ell2/surface.hpp"

namespace ell2::suites {

namespace {

using Clock = std::chrono::steady_clock;
using Q = boost::multiprecision::cpp_rational;

struct Builder {
  Record rec;
  Clock::time_point t0 = Clock::now();

  Builder(const std::string& suite, const std::string& check, const std::string& anchor, const RunConfig& cfg,
          const std::string& extra = "") {
    rec.suite = suite;
    rec.check = check;
    rec.anchor = anchor;
    std::ostringstream in;
    in << check << "|seed=" << cfg.seed << "|w=" << cfg.weight_count << "," << cfg.weight_ratio
       << "|dims=" << cfg.dims << "|" << extra;
    rec.inputs_digest = sha1_hex(in.str()).substr(0, 16);
  }
  void value(const std::string& name, double v) { rec.values.push_back({name, v}); }
  Record done(bool pass, double tol, const std::string& detail = "") {
    rec.pass = pass;
    rec.tolerance = tol;
    rec.detail = detail;
    rec.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return rec;
  }
};

Rng rng_for(const RunConfig& cfg, std::uint64_t salt) { return Rng(chunk_seed(cfg.seed, 0xC0FFEEull + salt)); }

SampleStream stream_for(const RunConfig& cfg, std::uint64_t salt, int dims) {
  SampleStream s;
  s.seed = cfg.seed;
  s.dims = dims;
  return s.derived(salt);
}

double uni(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uint_in(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

MultiIndex random_monomial(Rng& rng, int vars, int max_deg) {
  int deg = uint_in(rng, 0, max_deg);
  std::vector<int> e(vars + 1, 0);
  for (int k = 0; k < deg; ++k) ++e[uint_in(rng, 1, vars)];
  std::vector<std::pair<int, int>> ent;
  for (int i = 1; i <= vars; ++i)
    if (e[i]) ent.emplace_back(i, e[i]);
  return MultiIndex(ent);
}

RealPoly random_poly(Rng& rng, int vars, int max_deg, int terms) {
  RealPoly p;
  for (int k = 0; k < terms; ++k) p.add_term(random_monomial(rng, vars, max_deg), uni(rng, -1.0, 1.0));
  if (p.is_zero()) p.add_term(MultiIndex{}, 1.0);
  return p;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

// ---------------------------------------------------------------- measure

Record hellinger_criterion(const RunConfig& cfg) {
  Builder b("measure", "hellinger-closed-form", "Hellinger integral of two one-dimensional Gaussians", cfg, "n=100");
  Rng rng = rng_for(cfg, 1);
  double worst = 0.0, wq = 0.0, wh = 0.0;
  bool identical_exact = true;
  for (int c = 0; c < 100; ++c) {
    double a = uni(rng, 0.2, 2.0), r = uni(rng, 0.5, 2.0), s = uni(rng, 0.5, 2.0);
    double x1 = uni(rng, -2.0, 2.0), x2 = uni(rng, -2.0, 2.0);
    double s1 = r * a, s2 = s * a;
    auto integrand = [&](double x) {
      double l1 = -0.5 * (x - x1) * (x - x1) / (s1 * s1) - std::log(s1);
      double l2 = -0.5 * (x - x2) * (x - x2) / (s2 * s2) - std::log(s2);
      return std::exp(0.5 * (l1 + l2)) / std::sqrt(2.0 * M_PI);
    };
    double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 15, 1e-14);
    double h = hellinger_1d(a, r, s, x1, x2);
    if (std::abs(q - h) >= worst) {
      worst = std::abs(q - h);
      wq = q;
      wh = h;
    }
    identical_exact = identical_exact && hellinger_1d(a, r, r, x1, x1) == 1.0;
  }
  b.value("max_abs_error", worst);
  b.value("quadrature", wq);
  b.value("closed_form", wh);
  b.value("identical_is_one", identical_exact ? 1.0 : 0.0);
  return b.done(worst <= 1e-8 && identical_exact, 1e-8);
}

Record dichotomy_criterion(const RunConfig& cfg) {
  Builder b("measure", "kakutani-dichotomy", "equivalent iff the Hellinger product is positive", cfg, "n=200");
  Rng rng = rng_for(cfg, 2);
  WeightSequence w = cfg.weights();
  int mismatched = 0, unexpected = 0, n_equiv = 0, n_sing = 0;
  for (int c = 0; c < 200; ++c) {
    int kind = c % 4;
    ShiftedGaussianPair p;
    p.weights = w;
    p.r = uni(rng, 0.5, 2.0);
    p.s = p.r;
    std::vector<double> h1(5), h2(5);
    for (auto& v : h1) v = uni(rng, -1.0, 1.0);
    for (auto& v : h2) v = uni(rng, -1.0, 1.0);
    double q = w.tail() ? w.tail()->ratio : 0.5;
    Verdict expect = Verdict::Equivalent;
    PowerGeometric t1 = PowerGeometric::geometric(uni(rng, -1.0, 1.0), q * q);  // (x/a)^2 summable
    PowerGeometric t2 = PowerGeometric::zero();
    if (kind == 0) {
      p.s = p.r * uni(rng, 1.05, 2.0);  // r != s
      expect = Verdict::Singular;
    } else if (kind == 2) {
      t1 = PowerGeometric::geometric(uni(rng, 0.5, 1.0), q);  // (x/a)^2 constant
      expect = Verdict::Singular;
    } else if (kind == 3) {
      h2 = h1;
      t2 = t1;
    }
    p.x1 = {h1, t1};
    p.x2 = {h2, t2};
    DichotomyVerdict v = classify_pair(p);
    double H = hellinger_product(p);
    if ((v.verdict == Verdict::Equivalent) != (H > 0.0)) ++mismatched;
    if (v.verdict != expect) ++unexpected;
    (v.verdict == Verdict::Equivalent ? n_equiv : n_sing)++;
  }
  b.value("inconsistent", mismatched);
  b.value("unexpected_verdicts", unexpected);
  b.value("equivalent", n_equiv);
  b.value("singular", n_sing);
  return b.done(mismatched == 0 && unexpected == 0, 0.0);
}

Record rn_criterion(const RunConfig& cfg) {
  Builder b("measure", "translation-density", "integral of g(y - s e_i) equals integral of g times the density", cfg,
            "n=20");
  Rng rng = rng_for(cfg, 3);
  double worst = 0.0, wl = 0.0, wr = 0.0;
  for (int c = 0; c < 20; ++c) {
    ProductGaussian g{cfg.weights(), uni(rng, 0.5, 1.5)};
    RealPoly p = random_poly(rng, 4, 4, 6);
    int i = uint_in(rng, 1, 4);
    double s = uni(rng, -1.0, 1.0);
    auto [l, r] = rn_translation_sides(g, p, i, s);
    double e = rel_err(l, r);
    if (e >= worst) {
      worst = e;
      wl = l;
      wr = r;
    }
  }
  b.value("max_rel_error", worst);
  b.value("lhs", wl);
  b.value("rhs", wr);
  return b.done(worst <= 1e-12, 1e-12);
}

Record fernique_criterion(const RunConfig& cfg) {
  Builder b("measure", "fernique", "Gaussian exponential moment and its threshold", cfg,
            "n=" + std::to_string(cfg.fernique_samples));
  ProductGaussian g{cfg.weights(), 1.0};
  double thr = fernique_integral(g, 1e-3).threshold;
  double c = 0.5 * thr;
  FerniqueResult half = fernique_integral(g, c);
  SampleStream st = stream_for(cfg, 4, cfg.dims);
  Estimate mc = mc_integrate(g, [c](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::exp(c * s);
  }, st, cfg.fernique_samples);
  double rel = std::abs(mc.mean - half.value) / half.value;
  bool div_at = !fernique_integral(g, thr).finite;
  bool div_above = !fernique_integral(g, std::nextafter(thr, 1e300)).finite && !fernique_integral(g, 2 * thr).finite;
  bool fin_below = fernique_integral(g, std::nextafter(thr, 0.0)).finite;
  b.value("threshold", thr);
  b.value("closed_form", half.value);
  b.value("mc_mean", mc.mean);
  b.value("mc_std_error", mc.std_error);
  b.value("rel_diff", rel);
  b.value("divergent_at_threshold", div_at);
  b.value("finite_below_threshold", fin_below);
  return b.done(rel <= 0.02 && div_at && div_above && fin_below, 0.02);
}

// ---------------------------------------------------------------- cutoff

Record cutoff_criterion(const RunConfig& cfg) {
  Builder b("cutoff", "smooth-cutoffs", "X_k is 1 on K_k, 0 off K_{k+2N1}, with bounded weighted gradient", cfg,
            "n=" + std::to_string(cfg.cutoff_samples));
  CutoffConfig cc;
  cc.weights = cfg.weights();
  cc.dims = cfg.dims;
  cc.samples = cfg.cutoff_samples;
  cc.stream = stream_for(cfg, 5, cfg.dims);
  CutoffSystem cut(cc);
  const int k = 1, d = cut.dims(), N1 = cut.N1();
  const double C2 = cut.C() * cut.C();
  Rng rng = rng_for(cfg, 5);
  std::normal_distribution<double> nd;
  auto point = [&](double rho) {
    std::vector<double> u(d);
    double nn = 0.0;
    for (auto& v : u) {
      v = nd(rng);
      nn += v * v;
    }
    for (int i = 0; i < d; ++i) u[i] *= rho * std::sqrt(cut.c()[i]) / std::sqrt(nn);
    return u;
  };
  int ones = 0, zeros = 0, grad_ok = 0;
  double worst_z = -std::numeric_limits<double>::infinity(), worst_val = 0.0;
  for (int p = 0; p < 100; ++p) {
    auto x = point(k * std::pow(uni(rng, 0.0, 1.0), 1.0 / d));
    if (cut.X(k, x) == 1.0) ++ones;
  }
  for (int p = 0; p < 100; ++p) {
    auto x = point(uni(rng, k + 2.0 * N1, k + 2.0 * N1 + 3.0));
    if (cut.X(k, x) == 0.0) ++zeros;
  }
  for (int p = 0; p < 100; ++p) {
    auto x = point(uni(rng, k, k + 2.0 * N1));
    auto gb = cut.gradient_bound(k, x);
    double z = gb.std_error > 0 ? (gb.value - C2) / gb.std_error : (gb.value > C2 ? INFINITY : -INFINITY);
    if (gb.value <= C2 + 4.0 * gb.std_error) ++grad_ok;
    if (z > worst_z) {
      worst_z = z;
      worst_val = gb.value;
    }
  }
  b.value("N1", N1);
  b.value("C_squared", C2);
  b.value("ones_on_K_k", ones);
  b.value("zeros_outside", zeros);
  b.value("gradient_within_4se", grad_ok);
  b.value("worst_gradient_value", worst_val);
  b.value("worst_gradient_z", worst_z);
  return b.done(ones == 100 && zeros == 100 && grad_ok == 100, 4.0);
}

// ---------------------------------------------------------------- surface

FinitePerturbationMap random_map(Rng& rng, const IndexSet& dom, IndexSet& cod_out) {
  // codomain: drop one or two members of the domain, add as many non-members
  IndexSet cod = dom;
  int swaps = uint_in(rng, 0, 2);
  std::vector<long> members = dom.elements_upto(12), others;
  for (long i = 1; i <= 12; ++i)
    if (!dom.contains(i)) others.push_back(i);
  std::shuffle(members.begin(), members.end(), rng);
  std::shuffle(others.begin(), others.end(), rng);
  for (int s = 0; s < swaps; ++s) cod = cod.with_toggled(members[s]).with_toggled(others[s]);
  std::vector<long> common;
  for (long i = 1; i <= 12; ++i)
    if (dom.contains(i) && cod.contains(i)) common.push_back(i);
  std::shuffle(common.begin(), common.end(), rng);
  std::vector<long> i0(common.begin(), common.begin() + uint_in(rng, 0, 3));
  std::size_t n = i0.size() + swaps;
  std::normal_distribution<double> nd;
  for (;;) {
    std::vector<double> block(n * n);
    for (auto& v : block) v = nd(rng);
    FinitePerturbationMap t(dom, cod, i0, block);
    if (n == 0 || std::abs(det_F_declared(t)) > 1e-2) {
      cod_out = cod;
      return t;
    }
  }
}

Record determinant_criterion(const RunConfig& cfg) {
  Builder b("surface", "determinant-identities", "det_F is multiplicative and det(T) det(T^-1) = 1", cfg, "n=100");
  Rng rng = rng_for(cfg, 6);
  double worst_mult = 0.0, worst_recip = 0.0;
  std::vector<IndexSet> bases{IndexSet::odds(), IndexSet::evens(), IndexSet::finite({1, 2, 3, 5, 8}),
                              IndexSet::cofinite({2, 7})};
  for (int c = 0; c < 100; ++c) {
    IndexSet I1 = bases[c % bases.size()], I2, I3;
    FinitePerturbationMap t1 = random_map(rng, I1, I2);
    FinitePerturbationMap t2 = random_map(rng, I2, I3);
    double lhs = det_F(compose(t2, t1)), rhs = det_F(t2) * det_F(t1);
    worst_mult = std::max(worst_mult, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    double rec = det_F(t1) * det_F(inverse(t1));
    worst_recip = std::max(worst_recip, std::abs(rec - 1.0));
  }
  b.value("max_rel_error_multiplicative", worst_mult);
  b.value("max_error_reciprocal", worst_recip);
  return b.done(worst_mult <= 1e-10 && worst_recip <= 1e-10, 1e-10);
}

Record chart_criterion(const RunConfig& cfg) {
  Builder b("surface", "chart-independence", "surface measure does not depend on the chart", cfg);
  LineBundle lb;
  lb.dims = 8;
  lb.x0 = {0.1, -0.2, 0.15, 0.05};
  lb.dx = {0.8, -0.5, 0.3, 0.6};
  WeightSequence w = cfg.weights();
  double worst = 0.0, wa = 0.0, wb = 0.0;
  for (long j : {2L, 4L, 6L, 8L}) {
    auto [ma, mb] = chart_consistency(lb, w, j, -0.3, 0.4);
    double e = std::abs(ma - mb) / std::max(std::abs(ma), 1e-300);
    if (e >= worst) {
      worst = e;
      wa = ma;
      wb = mb;
    }
  }
  b.value("max_rel_diff", worst);
  b.value("chart_I", wa);
  b.value("chart_j", wb);
  return b.done(worst <= 1e-3, 1e-3);
}

Record gauss_green_criterion(const RunConfig& cfg) {
  Builder b("surface", "gauss-green", "int_V D_i f = int_V x_i f / a_i^2 + int_dV f nu_i", cfg,
            "n=" + std::to_string(cfg.gauss_green_samples));
  Rng rng = rng_for(cfg, 8);
  WeightSequence w = cfg.weights();
  int ok = 0, total = 0;
  double worst_z = 0.0, worst_res = 0.0, worst_se = 0.0;
  for (int c = 0; c < 30; ++c) {
    int dims = 2 + c % 7;
    RealPoly f = random_poly(rng, dims, 3, 4);
    int i = uint_in(rng, 1, dims);
    GaussGreenDomain half;
    half.kind = DomainKind::HalfSpace;
    half.dims = dims;
    half.k = uint_in(rng, 1, dims);
    GaussGreenDomain ball;
    ball.kind = DomainKind::Ball;
    ball.dims = dims;
    for (int j = 0; j < dims; ++j) ball.center.push_back(uni(rng, -0.3, 0.3) * w.a(j + 1));
    ball.radius = uni(rng, 0.3, 1.0);
    for (auto* dom : {&half, &ball}) {
      SampleStream st = stream_for(cfg, 800 + 2 * c + (dom == &ball), dims);
      GaussGreenResult r = gauss_green_check(w, *dom, f, i, st, cfg.gauss_green_samples);
      ++total;
      double z = r.std_error > 0 ? std::abs(r.residual) / r.std_error : (r.residual == 0 ? 0 : INFINITY);
      if (std::abs(r.residual) <= 4.0 * r.std_error) ++ok;
      if (z >= worst_z) {
        worst_z = z;
        worst_res = r.residual;
        worst_se = r.std_error;
      }
    }
  }
  GaussGreenDomain h1;
  h1.kind = DomainKind::HalfSpace;
  h1.dims = 2;
  h1.k = 1;
  GaussGreenResult one = gauss_green_exact(w, h1, RealPoly(1.0), 1);
  b.value("within_4se", ok);
  b.value("checks", total);
  b.value("worst_z", worst_z);
  b.value("worst_residual", worst_res);
  b.value("worst_std_error", worst_se);
  b.value("f1_volume", one.volume);
  b.value("f1_boundary", one.boundary);
  b.value("f1_residual", one.residual);
  return b.done(ok == total && std::abs(one.residual) <= 1e-10, 4.0);
}

// ---------------------------------------------------------------- dbar

CPoly random_cpoly(Rng& rng, int vars, int max_deg, int terms) {
  CPoly p;
  for (int k = 0; k < terms; ++k) {
    CMono m;
    int deg = uint_in(rng, 0, max_deg);
    for (int e = 0; e < deg; ++e) {
      int j = uint_in(rng, 1, vars);
      auto [pz, qz] = m.exponents(j);
      m = uint_in(rng, 0, 1) ? m.with(j, pz + 1, qz) : m.with(j, pz, qz + 1);
    }
    p.add(m, cplx(uint_in(rng, -3, 3), uint_in(rng, -3, 3)));
  }
  if (p.is_zero()) p.add(CMono{}, 1.0);
  return p;
}

std::vector<IndexList> subsets(int n, int k) {
  std::vector<IndexList> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    IndexList l;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) l.push_back(i + 1);
    out.push_back(l);
  }
  return out;
}

Form random_form(Rng& rng, int s, int t, int vars, int max_deg) {
  Form f(s, t);
  auto Is = subsets(vars, s), Js = subsets(vars, t);
  int comps = uint_in(rng, 1, 3);
  for (int c = 0; c < comps; ++c)
    f.add(Is[uint_in(rng, 0, static_cast<int>(Is.size()) - 1)], Js[uint_in(rng, 0, static_cast<int>(Js.size()) - 1)],
          random_cpoly(rng, vars, max_deg, uint_in(rng, 1, 4)));
  return f;
}

Record dbar_calculus_criterion(const RunConfig& cfg) {
  Builder b("dbar", "dbar-calculus", "S S = 0, (T* f, u) = (f, T u), basic estimate", cfg, "n=100/100/200");
  Rng rng = rng_for(cfg, 9);
  WeightSequence w = cfg.weights();
  const double r = 1.0;
  int ss_nonzero = 0;
  for (int c = 0; c < 100; ++c) {
    Form f = random_form(rng, uint_in(rng, 0, 1), uint_in(rng, 0, 1), 3, 3);
    if (!apply_S(apply_S(f)).is_zero()) ++ss_nonzero;
  }
  double worst_adj = 0.0;
  for (int c = 0; c < 100; ++c) {
    int s = uint_in(rng, 0, 1), t = uint_in(rng, 0, 1);
    Form u = random_form(rng, s, t, 3, 3);
    Form f = random_form(rng, s, t + 1, 3, 3);
    cplx lhs = form_inner(apply_Tstar(f, w, r), u, w, r);
    cplx rhs = form_inner(f, apply_S(u), w, r);
    worst_adj = std::max(worst_adj, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  double worst_gap = -std::numeric_limits<double>::infinity();
  int est_fail = 0;
  for (int c = 0; c < 200; ++c) {
    int s = uint_in(rng, 0, 1), t = uint_in(rng, 0, 1);
    Form f = random_form(rng, s, t + 1, 3, 3);
    BasicEstimate e = basic_estimate_check(f, w, r);
    double gap = (e.lhs - e.rhs) / std::max(1.0, e.rhs);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-12) ++est_fail;
  }
  Form eq(0, 1);
  eq.add({}, {1}, CPoly(1.0));
  BasicEstimate e = basic_estimate_check(eq, w, r);
  double expect = w.a(1) * w.a(1) / (2 * r * r);
  bool equality = std::abs(e.lhs - expect) <= 1e-12 && std::abs(e.rhs - expect) <= 1e-12;
  b.value("SS_nonzero", ss_nonzero);
  b.value("max_adjoint_rel_error", worst_adj);
  b.value("estimate_failures", est_fail);
  b.value("max_rel_gap", worst_gap);
  b.value("equality_lhs", e.lhs);
  b.value("equality_rhs", e.rhs);
  return b.done(ss_nonzero == 0 && worst_adj <= 1e-12 && est_fail == 0 && equality, 1e-12);
}

Record dbar_solve_criterion(const RunConfig& cfg) {
  Builder b("dbar", "dbar-solve", "least-norm solution of T u = f with ||u|| <= sqrt(2 r^2 / (t+1)) ||f||", cfg,
            "n=20");
  Rng rng = rng_for(cfg, 10);
  WeightSequence w = cfg.weights();
  const double r = 1.0;
  const int cap = 6;
  double worst_res = 0.0, worst_excess = -INFINITY, worst_orth = 0.0, worst_ratio = 0.0, bound = 0.0;
  for (int c = 0; c < 20; ++c) {
    Form f(0, 1);
    f.add({}, {1}, random_cpoly(rng, 1, 3, 3));
    DbarSolution sol = solve_dbar(f, w, r, cap, 1);
    bound = sol.bound;
    worst_res = std::max(worst_res, sol.residual);
    worst_excess = std::max(worst_excess, sol.norm_ratio - sol.bound);
    worst_ratio = std::max(worst_ratio, sol.norm_ratio);
    CPoly u;
    auto it = sol.u.terms.find({{}, {}});
    if (it != sol.u.terms.end()) u = it->second;
    double nu = std::sqrt(std::max(0.0, inner(u, u, w, r).real()));
    for (int h = 0; h < 20; ++h) {
      CPoly hol;
      int terms = uint_in(rng, 1, 3);
      for (int k = 0; k < terms; ++k) {
        int p = uint_in(rng, 0, cap);
        hol.add(p ? CMono::z(1, p) : CMono{}, cplx(uni(rng, -1, 1), uni(rng, -1, 1)));
      }
      if (hol.is_zero()) continue;
      double nh = std::sqrt(inner(hol, hol, w, r).real());
      worst_orth = std::max(worst_orth, std::abs(inner(u, hol, w, r)) / std::max(1e-300, nu * nh));
    }
  }
  b.value("max_rel_residual", worst_res);
  b.value("max_norm_ratio", worst_ratio);
  b.value("bound", bound);
  b.value("max_ratio_minus_bound", worst_excess);
  b.value("max_kernel_correlation", worst_orth);
  return b.done(worst_res <= 1e-8 && worst_excess <= 1e-8 && worst_orth <= 1e-10, 1e-8);
}

// ---------------------------------------------------------------- ck

MonomialSeries<Q> random_series(Rng& rng, int vars, int max_deg, int terms, bool with_t, int cap) {
  MonomialSeries<Q> s(cap);
  for (int k = 0; k < terms; ++k) {
    MultiIndex m = random_monomial(rng, vars, max_deg);
    int t = with_t ? uint_in(rng, 0, 1) : 0;
    s.add({t, m}, Q(uint_in(rng, -4, 4), uint_in(rng, 1, 4)));
  }
  return s;
}

Record ck_criterion(const RunConfig& cfg) {
  Builder b("ck", "cauchy-kowalevski", "power-series solution of u_t = sum A_i d_i u + A_0 u", cfg, "n=50;D=12");
  Rng rng = rng_for(cfg, 11);
  const int D = 12, n = 3;
  int nonzero = 0, ic_bad = 0;
  for (int c = 0; c < 50; ++c) {
    LinearCauchyProblem<Q> pb;
    pb.A0 = random_series(rng, n, 1, 2, true, D);
    for (int i = 1; i <= n; ++i)
      if (uint_in(rng, 0, 2)) pb.A.emplace_back(i, random_series(rng, n, 1, 2, true, D));
    pb.Phi = random_series(rng, n, 3, 4, false, D);
    MonomialSeries<Q> u = ck_solve(pb, D, n);
    if (!ck_residual(pb, u, D, n).is_zero()) ++nonzero;
    if (!ck_initial_mismatch(pb, u, D, n).is_zero()) ++ic_bad;
  }

  // closed forms in double precision
  double worst = 0.0;
  {
    LinearCauchyProblem<double> tr;
    tr.A0 = MonomialSeries<double>(D);
    tr.A.emplace_back(1, MonomialSeries<double>::constant(2.0, D));
    tr.Phi = MonomialSeries<double>(D);
    tr.Phi.add({0, MultiIndex::unit(1, 3)}, 1.0);
    auto u = ck_solve(tr, D, n);
    // (x_1 + 2t)^3
    const double expect[4] = {1.0, 6.0, 12.0, 8.0};
    double extra = 0.0;
    for (auto& [k, v] : u.terms()) {
      if (k.t + k.x.degree() == 3 && k.x.exponent(1) == 3 - k.t && k.x.max_index() <= 1)
        worst = std::max(worst, std::abs(v - expect[k.t]));
      else
        extra = std::max(extra, std::abs(v));
    }
    for (int m = 0; m <= 3; ++m) {
      MultiIndex mi = m < 3 ? MultiIndex::unit(1, 3 - m) : MultiIndex{};
      worst = std::max(worst, std::abs(u.coeff({m, mi}) - expect[m]));
    }
    worst = std::max(worst, extra);
  }
  {
    LinearCauchyProblem<double> ex;
    ex.A0 = MonomialSeries<double>::constant(1.0, D);
    ex.Phi = MonomialSeries<double>::constant(1.0, D);
    auto u = ck_solve(ex, D, n);
    double fact = 1.0;
    for (int k = 0; k <= D; ++k) {
      if (k) fact *= k;
      worst = std::max(worst, std::abs(u.coeff({k, {}}) - 1.0 / fact));
    }
    worst = std::max(worst, static_cast<double>(u.terms().size()) - (D + 1));
  }

  // frames: v_i = 2^i with p = 1 and p = 2
  double frame_err = 0.0;
  for (double p : {1.0, 2.0}) {
    TailedPoint v;
    for (int i = 1; i <= 6; ++i) v.head.push_back(std::ldexp(1.0, i));
    v.tail = PowerGeometric::geometric(1.0, 2.0);
    MajorantFrame fr = majorant_frame(v, p);
    frame_err = std::max(frame_err, std::abs(fr.power_sum - 1.0));
  }
  b.value("nonzero_residuals", nonzero);
  b.value("initial_mismatches", ic_bad);
  b.value("closed_form_max_error", worst);
  b.value("frame_power_sum_error", frame_err);
  return b.done(nonzero == 0 && ic_bad == 0 && worst <= 1e-12 && frame_err <= 1e-12, 1e-12);
}

// ---------------------------------------------------------------- sobolev

Record sobolev_criterion(const RunConfig& cfg) {
  Builder b("sobolev", "sobolev", "translation identity, unbounded translation ratio, chart change of variables",
            cfg, "n=100;points=10000");
  Rng rng = rng_for(cfg, 12);
  WeightSequence w = cfg.weights();
  double worst_tr = 0.0;
  for (int c = 0; c < 100; ++c) {
    RealPoly f = random_poly(rng, 3, 4, 5);
    double t = uni(rng, -2.0, 2.0);
    auto s = translation_identity_check(f, t, w);
    worst_tr = std::max(worst_tr, std::abs(s.lhs - s.rhs) / std::max(std::abs(s.lhs), 1e-300));
  }

  bool bracketed = true, decreasing = true;
  double prev = INFINITY, last = 0.0;
  for (int n = 0; n <= 10; ++n) {
    auto row = translation_unboundedness_demo(n, w.a(1));
    bracketed = bracketed && row.lower <= row.ratio && row.ratio <= row.upper;
    decreasing = decreasing && row.ratio < prev;
    prev = last = row.ratio;
  }

  SphereChart chart(w);
  auto cs = chart_sample_check(chart, std::min(cfg.dims, 6), 10000, stream_for(cfg, 12, cfg.dims));
  bool jac_bounds = cs.J_min >= chart.C1() && cs.J_max <= chart.C2() && cs.J1_min >= chart.C1() &&
                    cs.J1_max <= chart.C2();

  bool equiv = true;
  double worst_mid_over_norm = 0.0;
  for (int c = 0; c < 5; ++c) {
    RealPoly f = random_poly(rng, 3, 3, 4);
    auto ne = chart_norm_equivalence(chart, f, 3);
    equiv = equiv && ne.holds();
    worst_mid_over_norm = std::max(worst_mid_over_norm, ne.mid * ne.C / ne.rhs);
  }
  auto one = chart_measure_identity(chart, [](const std::vector<double>&) { return 1.0; }, 3);

  b.value("translation_max_rel_error", worst_tr);
  b.value("ratios_bracketed", bracketed);
  b.value("ratios_decreasing", decreasing);
  b.value("ratio_n10", last);
  b.value("jacobian_product_max_defect", cs.max_product_defect);
  b.value("jacobian_within_C1_C2", jac_bounds);
  b.value("norm_equivalence_holds", equiv);
  b.value("norm_ratio_max", worst_mid_over_norm);
  b.value("chart_measure_direct", one.direct);
  b.value("chart_measure_pulled", one.pulled);
  bool pass = worst_tr <= 1e-12 && bracketed && decreasing && last < 1e-6 && cs.max_product_defect <= 1e-10 &&
              jac_bounds && equiv;
  return b.done(pass, 1e-12);
}

}  // namespace

std::vector<Record> measure(const RunConfig& cfg) {
  return {hellinger_criterion(cfg), dichotomy_criterion(cfg), rn_criterion(cfg), fernique_criterion(cfg)};
}

std::vector<Record> cutoff(const RunConfig& cfg) { return {cutoff_criterion(cfg)}; }

std::vector<Record> surface(const RunConfig& cfg) {
  return {determinant_criterion(cfg), chart_criterion(cfg), gauss_green_criterion(cfg)};
}

std::vector<Record> dbar(const RunConfig& cfg) { return {dbar_calculus_criterion(cfg), dbar_solve_criterion(cfg)}; }

std::vector<Record> ck(const RunConfig& cfg) { return {ck_criterion(cfg)}; }

std::vector<Record> sobolev(const RunConfig& cfg) { return {sobolev_criterion(cfg)}; }

std::vector<Record> determinism(const RunConfig& cfg) {
  Builder b("determinism", "determinism", "same config and seed give a byte-identical report for any worker count",
            cfg);
  RunConfig sub = cfg;
  sub.suites = {"measure", "dbar", "ck"};
  int saved = worker_count();
  std::string d1, d2, d3;
  try {
    set_worker_count(1);
    d1 = run_suite(sub).digest();
    set_worker_count(std::max(2, saved));
    d2 = run_suite(sub).digest();
    d3 = run_suite(sub).digest();
  } catch (...) {
    set_worker_count(saved);
    throw;
  }
  set_worker_count(saved);
  bool same = d1 == d2 && d2 == d3;
  b.value("identical", same);
  return {b.done(same, 0.0, "digest=" + d1.substr(0, 16) + (same ? "" : " vs " + d2.substr(0, 16)))};
}

}  // namespace ell2::suites
