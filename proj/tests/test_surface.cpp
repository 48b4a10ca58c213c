#include <cmath>

#include "doctest.h"
#include "ell2/errors.hpp"
#include "ell2/surface.hpp"
#include "generators.hpp"

using namespace ell2;

namespace {

const double kDensity0 = 1.0 / (std::sqrt(2 * M_PI) * 0.5);  // N(0, 1/4) density at 0

FinitePerturbationMap random_map(Rng& r, const IndexSet& dom, int swaps, int extra) {
  IndexSet cod = dom;
  std::vector<long> in = dom.elements_upto(10), out;
  for (long i = 1; i <= 10; ++i)
    if (!dom.contains(i)) out.push_back(i);
  std::shuffle(in.begin(), in.end(), r);
  std::shuffle(out.begin(), out.end(), r);
  for (int s = 0; s < swaps; ++s) cod = cod.with_toggled(in[s]).with_toggled(out[s]);
  std::vector<long> i0(in.begin() + swaps, in.begin() + swaps + extra);
  std::size_t n = swaps + extra;
  std::vector<double> block(n * n);
  for (;;) {
    for (auto& v : block) v = gen::real(r, -2, 2);
    FinitePerturbationMap t(dom, cod, i0, block);
    if (n == 0 || std::abs(det_F_declared(t)) > 0.05) return t;
  }
}

}  // namespace

TEST_CASE("index sets") {
  IndexSet odds = IndexSet::odds();
  CHECK(odds.contains(1));
  CHECK_FALSE(odds.contains(2));
  CHECK(odds.with_toggled(2).contains(2));
  CHECK(index_equivalent(IndexSet::cofinite({1}), IndexSet::cofinite({2})));
  CHECK_FALSE(index_equivalent(IndexSet::cofinite({1}), IndexSet::cofinite({1, 2})));
  CHECK_FALSE(index_equivalent(IndexSet::odds(), IndexSet::evens()));
  CHECK(IndexSet::finite({3, 1}).elements_upto(10) == std::vector<long>{1, 3});
  CHECK(odds.difference(odds.with_toggled(1).with_toggled(4)) == std::vector<long>{1});
  CHECK_THROWS_AS(IndexSet::odds().difference(IndexSet::evens()), Error);
}

TEST_CASE("determinant of a worked 2x2 example") {
  // I1 = {1,2}, I2 = {1,3}, I0 = {1}; T e1 = e1 + e3, T e2 = 2 e3.
  FinitePerturbationMap t(IndexSet::finite({1, 2}), IndexSet::finite({1, 3}), {1}, {1, 0, 1, 2});
  CHECK(det_F(t) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(t.entry(3, 1) == 1.0);
  CHECK(t.entry(1, 2) == 0.0);
  CHECK_THROWS_AS(FinitePerturbationMap(IndexSet::finite({1, 2}), IndexSet::finite({1, 3}), {1}, {1, 0, 1}), Error);
  CHECK_THROWS_AS(FinitePerturbationMap(IndexSet::finite({1, 2}), IndexSet::finite({3}), {}, {1}), Error);
  CHECK_THROWS_AS(inverse(FinitePerturbationMap(IndexSet::finite({1}), IndexSet::finite({2}), {}, {0.0})), Error);
}

TEST_CASE("property: det_F is multiplicative and inverts") {
  Rng r(41);
  std::vector<IndexSet> bases{IndexSet::odds(), IndexSet::evens(), IndexSet::cofinite({4}), IndexSet::finite({1, 2, 5})};
  for (int k = 0; k < 100; ++k) {
    const IndexSet& I1 = bases[k % bases.size()];
    auto t1 = random_map(r, I1, gen::integer(r, 0, 1), gen::integer(r, 0, 2));
    auto t2 = random_map(r, t1.codomain(), gen::integer(r, 0, 1), gen::integer(r, 0, 2));
    double d12 = det_F(compose(t2, t1));
    REQUIRE(d12 == doctest::Approx(det_F(t2) * det_F(t1)).epsilon(1e-10));
    REQUIRE(det_F(t1) * det_F(inverse(t1)) == doctest::Approx(1.0).epsilon(1e-10));
    // composing with the inverse gives the identity on the domain
    auto id = compose(inverse(t1), t1);
    for (long c : t1.cols())
      for (long rr : t1.cols()) REQUIRE(id.entry(rr, c) == doctest::Approx(rr == c ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));
  }
}

TEST_CASE("graph surface normalisers") {
  GraphSurface g{{1}, {2}, {0.0}, {3.0}};
  CHECK(n_I(g) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
  CHECK(n_I_minors(g) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
  LineBundle lb;
  lb.dims = 6;
  lb.x0 = {0, 0, 0};
  lb.dx = {1, 1, 1};
  CHECK(lb.n_closed() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(n_I(lb.chart_I()) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("property: n_I by Cauchy-Binet equals the minor expansion") {
  Rng r(42);
  for (int k = 0; k < 30; ++k) {
    int b = gen::integer(r, 1, 3), c = gen::integer(r, 1, 3);
    GraphSurface g;
    for (int i = 0; i < b; ++i) g.base.push_back(2 * i + 1);
    for (int j = 0; j < c; ++j) g.comp.push_back(2 * j + 2);
    g.offset.assign(c, 0.0);
    for (int q = 0; q < b * c; ++q) g.slope.push_back(gen::real(r, -2, 2));
    REQUIRE(n_I(g) == doctest::Approx(n_I_minors(g)).epsilon(1e-12));
  }
}

TEST_CASE("F weight") {
  WeightSequence w = WeightSequence::geometric(8);
  CHECK(F_weight(w, IndexSet::finite({1}), TruncatedPoint{}, 8) == doctest::Approx(kDensity0).epsilon(1e-14));
  try {
    F_weight(w, IndexSet::odds(), TruncatedPoint{}, 8);
    FAIL("expected TailDivergent");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TailDivergent);
  }
}

TEST_CASE("surface measure of the hyperplane x_1 = 0") {
  WeightSequence w = WeightSequence::geometric(8);
  GraphSurface plane{{2, 3}, {1}, {0.0}, {0.0, 0.0}};
  CHECK(surface_measure(plane, w, {}, SampleStream{}) == doctest::Approx(kDensity0).epsilon(1e-10));
}

TEST_CASE("line bundle surface measure: closed form and chart independence") {
  WeightSequence w = WeightSequence::geometric(8);
  LineBundle lb;
  lb.x0 = {0.1, -0.2, 0.15, 0.05};
  lb.dx = {0.8, -0.5, 0.3, 0.6};
  // through chart I: n_I * int_lo^hi rho_1(x_1) prod_j rho_j(x0_j + x_1 dx_j) dx_1
  auto integrand = [&](double x1) {
    double l = -0.5 * x1 * x1 / 0.25 - std::log(std::sqrt(2 * M_PI) * 0.5);
    for (int q = 0; q < 4; ++q) {
      double a = w.a(2 * q + 2), y = lb.x0[q] + x1 * lb.dx[q];
      l += -0.5 * y * y / (a * a) - std::log(std::sqrt(2 * M_PI) * a);
    }
    return std::exp(l);
  };
  double expect = lb.n_closed() * gauss_legendre_composite(integrand, -0.3, 0.4, 64);
  for (long j : {2L, 4L, 6L, 8L}) {
    auto [mI, mj] = chart_consistency(lb, w, j, -0.3, 0.4);
    CHECK(mI == doctest::Approx(expect).epsilon(1e-8));
    CHECK(mj == doctest::Approx(mI).epsilon(1e-3));
    CHECK(det_F(lb.chart_change(j)) * det_F(lb.chart_change_inverse(j)) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(lb.chart_j(3), Error);
}

TEST_CASE("Gauss-Green on a half-space, exact") {
  WeightSequence w = WeightSequence::geometric(8);
  GaussGreenDomain h;
  h.dims = 3;
  GaussGreenResult one = gauss_green_exact(w, h, RealPoly(1.0), 1);
  CHECK(one.lhs == 0.0);
  // D_1 1 = 0, so the adjoint term x_1/a_1^2 alone balances the boundary flux
  CHECK(std::abs(one.volume) == doctest::Approx(kDensity0).epsilon(1e-12));
  CHECK(std::abs(one.boundary) == doctest::Approx(kDensity0).epsilon(1e-12));
  CHECK(std::abs(one.residual) <= 1e-10);
  GaussGreenResult x1 = gauss_green_exact(w, h, RealPoly::var(1), 1);
  CHECK(x1.lhs == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(x1.volume == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(x1.boundary == 0.0);
}

TEST_CASE("property: Gauss-Green residual is within Monte Carlo error") {
  WeightSequence w = WeightSequence::geometric(8);
  Rng r(43);
  for (int k = 0; k < 6; ++k) {
    int dims = 2 + k;
    RealPoly f = gen::poly(r, dims, 3, 3);
    GaussGreenDomain v;
    v.dims = dims;
    if (k % 2) {
      v.kind = DomainKind::Ball;
      v.center.assign(dims, 0.1);
      v.radius = 0.6;
    } else {
      v.k = gen::integer(r, 1, dims);
    }
    SampleStream st;
    st.dims = dims;
    GaussGreenResult res = gauss_green_check(w, v, f, gen::integer(r, 1, dims), st.derived(k), 50000);
    REQUIRE(std::abs(res.residual) <= 4 * res.std_error + 1e-12);
  }
}

TEST_CASE("Stokes on flat pieces") {
  WeightSequence w = WeightSequence::geometric(8);
  RealPoly f = RealPoly::var(1) * RealPoly::var(2) + RealPoly(1.0);
  StokesScene half;
  half.dims = 3;
  half.comp = {3};
  half.offset = {0.1};
  half.region.dims = 2;
  half.region.k = 1;
  StokesResult a = stokes_check(w, half, f, 1);
  CHECK(std::abs(a.residual) <= 1e-3 * std::max(std::abs(a.surface), 1e-12));
  StokesScene ball = half;
  ball.region.kind = DomainKind::Ball;
  ball.region.center = {0.0, 0.0};
  ball.region.radius = 0.4;
  RealPoly radial = RealPoly::var(1) * RealPoly::var(1) + RealPoly::var(2) * RealPoly::var(2);
  StokesResult b = stokes_check(w, ball, radial, 2);
  CHECK(std::abs(b.residual) <= 1e-3 * std::max(std::abs(b.surface), 1e-12));
  StokesScene bad = half;
  bad.comp = {1, 2, 3};
  bad.offset = {0, 0, 0};
  CHECK_THROWS_AS(stokes_check(w, bad, f, 1), Error);
}
