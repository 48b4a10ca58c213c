#include <cmath>

#include "doctest.h"
#include "ell2/errors.hpp"
#include "ell2/sobolev.hpp"
#include "generators.hpp"

using namespace ell2;

namespace {
const WeightSequence W = WeightSequence::geometric(8);
}

TEST_CASE("Gaussian adjoint of D_i") {
  RealPoly x1 = RealPoly::var(1);
  RealPoly expect = RealPoly(-1.0) + (x1 * x1).scaled(4.0);
  CHECK(adjoint_derivative(x1, 1, W) == expect);
}

TEST_CASE("property: D_i and its adjoint are dual, exactly") {
  Rng r(71);
  for (int k = 0; k < 50; ++k) {
    RealPoly f = gen::poly(r, 3, 4, 4);
    std::vector<RealPoly> tests;
    for (int t = 0; t < 5; ++t) tests.push_back(gen::poly(r, 3, 3, 3));
    REQUIRE(weak_derivative_defect(f, gen::integer(r, 1, 3), tests, W) <= 1e-12);
  }
}

TEST_CASE("multi-indices and derivatives") {
  CHECK(multi_indices_upto({1, 2}, 2).size() == 5);
  RealPoly f = RealPoly::var(1) * RealPoly::var(1) * RealPoly::var(2);
  CHECK(derivative(f, MultiIndex({{1, 2}, {2, 1}})) == RealPoly(2.0));
  CHECK(derivative(f, MultiIndex::unit(3)).is_zero());
}

TEST_CASE("Sobolev norm oracles") {
  CHECK(sobolev_norm(RealPoly::var(1), 1, W) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(sobolev_norm(RealPoly::var(1) * RealPoly::var(2), 2, W) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(sobolev_norm(RealPoly::var(1), 0, W) == doctest::Approx(0.5).epsilon(1e-15));
  GaussGreenDomain half;
  half.dims = 2;
  CHECK(sobolev_norm(RealPoly(1.0), 1, W, half) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  // x_1 restricted to x_1 > 0: int x^2 = a^2/2, derivative a^2 * 1/2
  CHECK(sobolev_norm(RealPoly::var(1), 1, W, half) == doctest::Approx(std::sqrt(0.25)).epsilon(1e-14));
  GaussGreenDomain ball;
  ball.kind = DomainKind::Ball;
  ball.dims = 2;
  ball.center = {0, 0};
  ball.radius = 6.0;
  CHECK(sobolev_norm(RealPoly::var(1), 1, W, ball) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-8));
}

TEST_CASE("translation identity") {
  auto s = translation_identity_check(RealPoly::var(1), 1.0, W);
  CHECK(s.lhs == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(s.rhs == doctest::Approx(1.25).epsilon(1e-12));
  Rng r(72);
  for (int k = 0; k < 50; ++k) {
    RealPoly f = gen::poly(r, 3, 4, 5);
    double t = gen::real(r, -2, 2);
    auto v = translation_identity_check(f, t, W);
    REQUIRE(v.lhs == doctest::Approx(v.rhs).epsilon(1e-12));
  }
}

TEST_CASE("translation is unbounded on H^1") {
  double a1 = 0.5, prev = INFINITY;
  for (int n = 0; n <= 10; ++n) {
    auto row = translation_unboundedness_demo(n, a1);
    CHECK(row.lower <= row.ratio);
    CHECK(row.ratio <= row.upper);
    CHECK(row.ratio < prev);
    prev = row.ratio;
    if (n == 0) {
      CHECK(row.lower == doctest::Approx(std::exp(-1.0 / (4 * a1 * a1))));
      CHECK(row.upper == doctest::Approx(std::exp(1.0 / (4 * a1 * a1))));
    }
  }
  CHECK(prev <= std::exp(1.0 - 20.0));
}

TEST_CASE("sphere chart constants") {
  SphereChart c(W);
  CHECK(c.delta() == 8.0);
  CHECK(c.C1() <= 1.0);
  CHECK(c.C2() >= 1.0);
  CHECK(c.C2() == doctest::Approx(8 * std::exp(64.0)));
}

TEST_CASE("property: chart maps invert each other and the Jacobian product is one") {
  Rng r(73);
  for (int k = 0; k < 200; ++k) {
    int d = gen::integer(r, 1, 6);
    std::vector<double> x(d);
    std::normal_distribution<double> nd;
    double nn = 0;
    for (auto& v : x) {
      v = nd(r);
      nn += v * v;
    }
    double rad = std::cbrt(gen::real(r, 0, 1)) / 3;
    for (auto& v : x) v *= rad / std::sqrt(nn);
    x[0] += 1.0;
    auto back = SphereChart::tau(SphereChart::psi(x));
    for (int i = 0; i < d; ++i) REQUIRE(back[i] == doctest::Approx(x[i]).epsilon(1e-13));
    REQUIRE(std::abs(SphereChart::D1h(SphereChart::psi(x)) * SphereChart::D1g(x) - 1.0) <= 1e-12);
  }
}

TEST_CASE("chart sample check") {
  SphereChart c(W);
  SampleStream st;
  auto rep = chart_sample_check(c, 6, 5000, st);
  CHECK(rep.max_product_defect <= 1e-10);
  CHECK(rep.J_min >= c.C1());
  CHECK(rep.J_max <= c.C2());
  CHECK(rep.J1_min >= c.C1());
  CHECK(rep.J1_max <= c.C2());
  CHECK_THROWS_AS(chart_sample_check(c, 0, 10, st), Error);
}

TEST_CASE("change of variables through the chart") {
  SphereChart c(W);
  for (int d : {2, 3}) {
    auto one = chart_measure_identity(c, [](const std::vector<double>&) { return 1.0; }, d);
    CHECK(one.direct > 0.0);
    CHECK(one.pulled == doctest::Approx(one.direct).epsilon(1e-8));
    auto poly = chart_measure_identity(c, [](const std::vector<double>& x) { return x[0] * x[0] - x[1]; }, d);
    CHECK(poly.pulled == doctest::Approx(poly.direct).epsilon(1e-8));
  }
}

TEST_CASE("norm equivalence through the chart") {
  SphereChart c(W);
  Rng r(74);
  for (int k = 0; k < 3; ++k) {
    RealPoly f = gen::poly(r, 3, 3, 4);
    auto ne = chart_norm_equivalence(c, f, 3);
    CHECK(ne.holds());
    CHECK(ne.mid > 0.0);
  }
  CHECK_THROWS_AS(chart_norm_equivalence(c, RealPoly::var(5), 3), Error);
}

TEST_CASE("cut-offs approximate f in H^1") {
  CutoffConfig cc;
  cc.dims = 4;
  cc.samples = 4000;
  CutoffSystem cut(cc);
  SampleStream st;
  st.dims = 4;
  auto e = cutoff_stability(RealPoly::var(1) + RealPoly(1.0), cut, 6, st, 4000);
  REQUIRE(e.size() == 6);
  CHECK(e.back().mean <= e.front().mean + 4 * e.front().std_error);
  CHECK(e.back().mean < 1e-3);
}
