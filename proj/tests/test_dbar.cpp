#include <cmath>

#include "doctest.h"
#include "ell2/dbar.hpp"
#include "ell2/errors.hpp"
#include "generators.hpp"

using namespace ell2;

namespace {
const WeightSequence W = WeightSequence::geometric(8);
const double R = 1.0;

double cabs_diff(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }
}  // namespace

TEST_CASE("delta_j oracles") {
  // delta_1 1 = -zbar_1 / (2 r^2 a_1^2) = -2 zbar_1
  CPoly d = delta_j(CPoly(1.0), 1, W, R);
  CHECK(d.terms().size() == 1);
  CHECK(d.terms().at(CMono::zbar(1)) == cplx(-2.0));
  CPoly e = delta_j(CPoly::monomial(CMono::z(1)), 1, W, R);
  CHECK(e.terms().at(CMono{}) == cplx(1.0));
  CHECK(e.terms().at(CMono({{1, 1, 1}})) == cplx(-2.0));
}

TEST_CASE("complex moments") {
  CHECK(expectation(CPoly::monomial(CMono({{1, 1, 1}})), W, R).real() == doctest::Approx(0.5));
  CHECK(expectation(CPoly::monomial(CMono({{1, 2, 2}})), W, R).real() == doctest::Approx(2 * 0.25));
  CHECK(expectation(CPoly::monomial(CMono::z(1)), W, R) == cplx(0.0));
}

TEST_CASE("property: integration by parts for dbar_i and delta_i") {
  Rng r(51);
  for (int k = 0; k < 100; ++k) {
    CPoly f = gen::cpoly(r, 3, 3, 3), g = gen::cpoly(r, 3, 3, 3);
    int i = gen::integer(r, 1, 3);
    cplx lhs = inner(f.dbar(i), g, W, R);
    cplx rhs = -inner(f, delta_j(g, i, W, R), W, R);
    REQUIRE(cabs_diff(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("S on simple forms") {
  Form f(0, 0);
  f.add({}, {}, CPoly::monomial(CMono::zbar(1)));
  Form s = apply_S(f);
  CHECK(s.t == 1);
  CHECK(s.terms.size() == 1);
  CHECK(s.terms.at({{}, {1}}).terms().at(CMono{}) == cplx(1.0));
  Form hol(0, 1);
  hol.add({}, {2}, CPoly::monomial(CMono::z(1, 2)));
  CHECK(apply_S(hol).is_zero());
  CHECK_THROWS_AS(f.add({2, 1}, {}, CPoly(1.0)), Error);
}

TEST_CASE("property: S S = 0 on random forms") {
  Rng r(52);
  for (int k = 0; k < 50; ++k) {
    Form f = gen::form(r, gen::integer(r, 0, 1), gen::integer(r, 0, 1), 3, 4);
    REQUIRE(apply_S(apply_S(f)).is_zero());
  }
}

TEST_CASE("property: T* is the adjoint of T") {
  Rng r(53);
  for (int k = 0; k < 100; ++k) {
    int s = gen::integer(r, 0, 1), t = gen::integer(r, 0, 1);
    Form u = gen::form(r, s, t, 3, 3), f = gen::form(r, s, t + 1, 3, 3);
    REQUIRE(cabs_diff(form_inner(apply_Tstar(f, W, R), u, W, R), form_inner(f, apply_S(u), W, R)) <= 1e-12);
  }
}

TEST_CASE("form norms") {
  Form f(0, 1);
  f.add({}, {1}, CPoly(1.0));
  CHECK(form_norm2(f, W, R) == doctest::Approx(0.25).epsilon(1e-15));
  Form g(0, 1);
  g.add({}, {1}, CPoly::monomial(CMono::z(1)));
  CHECK(form_norm2(g, W, R) == doctest::Approx(0.25 * 2 * 0.25).epsilon(1e-15));
}

TEST_CASE("basic estimate: equality and strict cases") {
  Form f(0, 1);
  f.add({}, {1}, CPoly(1.0));
  BasicEstimate e = basic_estimate_check(f, W, R);
  CHECK(std::abs(e.lhs - 0.125) <= 1e-12);
  CHECK(std::abs(e.rhs - 0.125) <= 1e-12);
  Form g(0, 1);
  g.add({}, {2}, CPoly::monomial(CMono::zbar(1)));
  BasicEstimate s = basic_estimate_check(g, W, R);
  CHECK(s.lhs < s.rhs);
}

TEST_CASE("property: basic estimate on random forms") {
  Rng r(54);
  for (int k = 0; k < 100; ++k) {
    int s = gen::integer(r, 0, 1), t = gen::integer(r, 0, 1);
    Form f = gen::form(r, s, t + 1, 3, 3);
    BasicEstimate e = basic_estimate_check(f, W, R);
    REQUIRE(e.lhs <= e.rhs * (1 + 1e-12) + 1e-14);
  }
}

TEST_CASE("dimension reduction") {
  RealPoly f = RealPoly::var(1) + RealPoly::var(3);
  CHECK(reduce_dimension(f, 2, W, R) == RealPoly::var(1));
  Rng r(55);
  for (int k = 0; k < 30; ++k) {
    CPoly p = gen::cpoly(r, 4, 3, 4);
    CPoly q = reduce_dimension(p, 2, W, R);
    REQUIRE(q.max_index() <= 2);
    REQUIRE(inner(q, q, W, R).real() <= inner(p, p, W, R).real() * (1 + 1e-12));
  }
}

TEST_CASE("solve dbar: one-variable oracles") {
  Form f(0, 1);
  f.add({}, {1}, CPoly(1.0));
  DbarSolution s = solve_dbar(f, W, R, 6, 1);
  CHECK(s.residual <= 1e-12);
  CPoly u = s.u.terms.at({{}, {}}).pruned(1e-12);
  CHECK(u.terms().size() == 1);
  CHECK(std::abs(u.terms().at(CMono::zbar(1)) - cplx(1.0)) <= 1e-12);
  CHECK(s.norm_ratio <= s.bound + 1e-8);

  Form g(0, 1);
  g.add({}, {1}, CPoly::monomial(CMono::zbar(1)));
  CPoly v = solve_dbar(g, W, R, 6, 1).u.terms.at({{}, {}}).pruned(1e-12);
  CHECK(v.terms().size() == 1);
  CHECK(std::abs(v.terms().at(CMono::zbar(1, 2)) - cplx(0.5)) <= 1e-12);
}

TEST_CASE("solve dbar rejects data that is not closed") {
  Form f(0, 1);
  f.add({}, {1}, CPoly::monomial(CMono::zbar(2)));
  CHECK_THROWS_AS(solve_dbar(f, W, R, 6, 2), Error);
}

TEST_CASE("property: least-norm solutions are orthogonal to holomorphic functions") {
  Rng r(56);
  for (int k = 0; k < 10; ++k) {
    Form f(0, 1);
    f.add({}, {1}, gen::cpoly(r, 1, 3, 3));
    DbarSolution s = solve_dbar(f, W, R, 6, 1);
    REQUIRE(s.residual <= 1e-8);
    REQUIRE(s.norm_ratio <= s.bound + 1e-8);
    CPoly u = s.u.terms.count({{}, {}}) ? s.u.terms.at({{}, {}}) : CPoly{};
    double nu = std::sqrt(inner(u, u, W, R).real());
    for (int p = 0; p <= 6; ++p) {
      CPoly h = CPoly::monomial(p ? CMono::z(1, p) : CMono{});
      double nh = std::sqrt(inner(h, h, W, R).real());
      REQUIRE(std::abs(inner(u, h, W, R)) <= 1e-10 * std::max(nu * nh, 1e-300));
    }
  }
}

TEST_CASE("multiplier identity with a likelihood-ratio cut-off") {
  CutoffConfig cc;
  cc.dims = 4;
  cc.samples = 4000;
  CutoffSystem cut(cc);
  Form f(0, 0);
  f.add({}, {}, CPoly(1.0));
  Form g(0, 1);
  g.add({}, {1}, CPoly(1.0));
  Form h(0, 1);
  h.add({}, {2}, CPoly::monomial(CMono::z(1)));
  SampleStream st;
  st.dims = 4;
  MultiplierReport rep = multiplier_identity_check(f, {g, h}, cut, 1, W, R, 2, st, 20000);
  CHECK(rep.max_ratio <= 4.0);
  MultiplierReport big = multiplier_identity_check(f, {g}, cut, 40, W, R, 2, st, 5000);
  CHECK(big.tx_term == 0.0);
}
