#include <cmath>

#include "doctest.h"
#include "ell2/cutoff.hpp"
#include "ell2/errors.hpp"
#include "generators.hpp"

using namespace ell2;

namespace {

const CutoffSystem& system8() {
  static const CutoffSystem s([] {
    CutoffConfig c;
    c.samples = 20000;
    return c;
  }());
  return s;
}

// x with sum x_i^2 / c_i = rho^2, random direction.
std::vector<double> at_radius(Rng& r, const CutoffSystem& cut, double rho) {
  std::normal_distribution<double> nd;
  std::vector<double> u(cut.dims());
  double nn = 0;
  for (auto& v : u) {
    v = nd(r);
    nn += v * v;
  }
  for (int i = 0; i < cut.dims(); ++i) u[i] *= rho * std::sqrt(cut.c()[i] / nn);
  return u;
}

}  // namespace

TEST_CASE("smoothstep profile") {
  const Smoothstep& H = Smoothstep::instance();
  CHECK(H.H(0.0) == 0.0);
  CHECK(H.H(0.24) == 0.0);
  CHECK(H.H(0.76) == 1.0);
  CHECK(H.H(-0.9) == 1.0);
  CHECK(H.H(0.5) > 0.0);
  CHECK(H.H(0.5) < 1.0);
  CHECK(bump_profile(1.0 / 16) == 0.0);
  CHECK(H.sup_dH() > 0.0);
  // finite-difference check of H'
  for (double x : {0.3, 0.45, 0.6, 0.7}) {
    double fd = (H.H(x + 1e-6) - H.H(x - 1e-6)) / 2e-6;
    CHECK(fd == doctest::Approx(H.dH(x)).epsilon(1e-5));
    CHECK(std::abs(H.dH(x)) <= H.sup_dH() * (1 + 1e-12));
  }
}

TEST_CASE("separating bump") {
  TruncatedPoint c({0.1, 0.2});
  CHECK(separating_bump(c, 1, 2, TruncatedPoint({0.1, 0.2})) == 1.0);
  CHECK(separating_bump(c, 1, 2, TruncatedPoint({3.0})) == 0.0);
  double mid = separating_bump(c, 1, 2, TruncatedPoint({1.6, 0.2}));
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  CHECK_THROWS_AS(separating_bump(c, 2, 1, c), Error);
}

TEST_CASE("calibration of N1") {
  const CutoffSystem& cut = system8();
  CHECK(cut.N1() >= 1);
  CHECK(cut.fraction_in_K(cut.N1()) > 0.8);
  CHECK(cut.g(50, std::vector<double>(8, 0.0)).mean > 0.8);
}

TEST_CASE("g_n separates K_{n-N1} from the complement of K_{n+N1}") {
  const CutoffSystem& cut = system8();
  Rng r(31);
  int n = 3 * cut.N1() + 1;
  for (int k = 0; k < 20; ++k) {
    auto in = at_radius(r, cut, (n - cut.N1()) * gen::real(r, 0, 1));
    CHECK(cut.g(n, in).mean > 0.8);
    auto out = at_radius(r, cut, n + cut.N1() + gen::real(r, 0, 2));
    CHECK(cut.g(n, out).mean < 0.2);
  }
}

TEST_CASE("X_k at the origin, far away, and deep inside") {
  const CutoffSystem& cut = system8();
  CHECK(cut.X(1, std::vector<double>(8, 0.0)) == 1.0);
  CHECK(cut.X(1, std::vector<double>(8, 100.0)) == 0.0);
  auto gb = cut.gradient_bound(1, std::vector<double>(8, 0.0));
  CHECK(gb.value == 0.0);
}

TEST_CASE("property: weighted gradient of X_k in the transition shell") {
  const CutoffSystem& cut = system8();
  Rng r(32);
  double C2 = cut.C() * cut.C();
  for (int k = 0; k < 20; ++k) {
    auto x = at_radius(r, cut, gen::real(r, 1, 1 + 2 * cut.N1()));
    auto gb = cut.gradient_bound(1, x);
    REQUIRE(gb.value <= C2 + 4 * gb.std_error);
    REQUIRE(cut.X(1, x) >= 0.0);
    REQUIRE(cut.X(1, x) <= 1.0);
  }
}

TEST_CASE("likelihood-ratio cut-off agrees with the counting cut-off and has a consistent gradient") {
  const CutoffSystem& cut = system8();
  Rng r(33);
  for (int k = 0; k < 5; ++k) {
    auto x = at_radius(r, cut, gen::real(r, 0.25, 1.5));
    int n = 1 + cut.N1();
    auto ge = cut.g(n, x);
    // the weights exp(<x,y>/a^2 - |x/a|^2/2) have variance exp(|x/a|^2) - 1
    double q = 0;
    for (int i = 0; i < cut.dims(); ++i) q += x[i] * x[i] / (cut.a()[i] * cut.a()[i]);
    double se_lr = std::sqrt(std::expm1(q) / 20000.0);
    CHECK(std::abs(cut.g_lr(n, x) - ge.mean) <= 5 * (ge.std_error + se_lr));
    auto grad = cut.grad_X_lr(1, x);
    for (int i : {0, 3}) {
      double h = 1e-5 * cut.c()[i];
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      double fd = (cut.X_lr(1, xp) - cut.X_lr(1, xm)) / (2 * h);
      CHECK(fd == doctest::Approx(grad[i]).epsilon(1e-4).scale(1e-6));
    }
  }
}

TEST_CASE("heat semigroup") {
  WeightSequence w = WeightSequence::geometric(8);
  SampleStream st;
  st.dims = 4;
  auto x1 = [](const std::vector<double>& x) { return x[0]; };
  Estimate s = heat_smooth(w, x1, 1.0, {0.3}, st, 50000);
  CHECK(std::abs(s.mean - 0.3) <= 4 * s.std_error);
  Estimate d = heat_partial(w, x1, 1.0, {0.3}, 1, st, 50000);
  CHECK(std::abs(d.mean - 1.0) <= 4 * d.std_error);
  auto sign = [](const std::vector<double>& x) { return x[1] > 0 ? 1.0 : -1.0; };
  for (double t : {0.5, 1.0}) {
    Estimate b = heat_partial(w, sign, t, {}, 2, st, 50000);
    CHECK(std::abs(b.mean) <= 1.0 / (t * w.a(2)) + 4 * b.std_error);
  }
  CHECK_THROWS_AS(heat_partial(w, x1, 1.0, {}, 9, st, 10), Error);
}

TEST_CASE("discontinuity of P_1 chi_A at x_0") {
  WeightSequence w = WeightSequence::geometric(8);
  SampleStream st;
  DiscontinuityResult r = discontinuity_demo(w, 8, st, 20000);
  double prod = 1.0;
  for (int m = 1; m <= 60; ++m) prod *= normal_cdf(1.0 / std::sqrt(w.a(m)));
  CHECK(r.fx0 == doctest::Approx(prod).epsilon(1e-12));
  CHECK(r.fx0 > 0.8);
  CHECK(r.fxn_limit == 0.0);
  CHECK(std::abs(r.fx0_mc.mean - r.fx0) <= 4 * r.fx0_mc.std_error + 1e-6);
}
