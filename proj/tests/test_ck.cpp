#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "doctest.h"
#include "ell2/ck.hpp"
#include "ell2/errors.hpp"
#include "generators.hpp"

using namespace ell2;
using Q = boost::multiprecision::cpp_rational;
using S = MonomialSeries<double>;

namespace {

MajorantFrame frame_pow2(int head) {
  TailedPoint v;
  for (int i = 1; i <= head; ++i) v.head.push_back(std::ldexp(1.0, i));
  v.tail = PowerGeometric::geometric(1.0, 2.0);
  return majorant_frame(v, 1.0);
}

S geometric_x1(int cap) {
  S s(cap);
  for (int k = 0; k <= cap; ++k) s.add({0, MultiIndex::unit(1, k).degree() ? MultiIndex::unit(1, k) : MultiIndex{}}, std::ldexp(1.0, -k));
  return s;
}

template <class T>
LinearCauchyProblem<T> random_problem(Rng& r, int n, int D) {
  LinearCauchyProblem<T> pb;
  pb.A0 = gen::series<T>(r, n, 1, 2, true, D);
  for (int i = 1; i <= n; ++i)
    if (gen::integer(r, 0, 2)) pb.A.emplace_back(i, gen::series<T>(r, n, 1, 2, true, D));
  pb.Phi = gen::series<T>(r, n, 3, 4, false, D);
  return pb;
}

}  // namespace

TEST_CASE("majorant frame for v_i = 2^i") {
  MajorantFrame f = frame_pow2(6);
  CHECK(f.rho0 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(f.power_sum - 1.0) <= 1e-12);
  for (int i = 1; i <= 10; ++i) CHECK(f.at(i) == doctest::Approx(std::ldexp(1.0, -i)).epsilon(1e-14));
  MajorantFrame f2 = majorant_frame(TailedPoint{{2, 4, 8}, PowerGeometric::geometric(1.0, 2.0)}, 2.0);
  CHECK(std::abs(f2.power_sum - 1.0) <= 1e-12);
  CHECK_THROWS_AS(majorant_frame(TailedPoint{{2}, PowerGeometric::geometric(1.0, 1.0)}, 1.0), Error);
  CHECK_THROWS_AS(majorant_frame(TailedPoint{{0.0}, PowerGeometric::geometric(1.0, 2.0)}, 1.0), Error);
  CHECK_THROWS_AS(majorant_frame(TailedPoint{{2}, PowerGeometric::geometric(1.0, 2.0)}, 0.0), Error);
}

TEST_CASE("series product truncates at the cap") {
  const int cap = 10;
  S geo(cap), one_minus(cap);
  for (int k = 0; k <= cap; ++k) geo.add({0, k ? MultiIndex::unit(1, k) : MultiIndex{}}, 1.0);
  one_minus.add({0, {}}, 1.0);
  one_minus.add({0, MultiIndex::unit(1)}, -1.0);
  S p = series_product(geo, one_minus);
  CHECK(p == S::constant(1.0, cap));
  CHECK(p.truncated_mass() > 0.0);
}

TEST_CASE("transport and exponential closed forms") {
  const int D = 12;
  LinearCauchyProblem<double> tr;
  tr.A.emplace_back(1, S::constant(1.0, D));
  tr.Phi = S::x(1, D);
  S u = ck_solve(tr, D, 3);
  CHECK(u.terms().size() == 2);
  CHECK(u.coeff({1, {}}) == 1.0);
  CHECK(u.coeff({0, MultiIndex::unit(1)}) == 1.0);

  LinearCauchyProblem<double> ex;
  ex.A0 = S::constant(1.0, D);
  ex.Phi = S::constant(1.0, D);
  S e = ck_solve(ex, D, 3);
  double fact = 1.0;
  for (int k = 0; k <= D; ++k) {
    if (k) fact *= k;
    CHECK(std::abs(e.coeff({k, {}}) - 1.0 / fact) <= 1e-12);
  }
  CHECK(e.terms().size() == static_cast<std::size_t>(D + 1));

  // u = (x_1 + 2t)^3
  LinearCauchyProblem<double> cube;
  cube.A.emplace_back(1, S::constant(2.0, D));
  cube.Phi = S(D);
  cube.Phi.add({0, MultiIndex::unit(1, 3)}, 1.0);
  S c = ck_solve(cube, D, 1);
  CHECK(c.coeff({0, MultiIndex::unit(1, 3)}) == 1.0);
  CHECK(c.coeff({1, MultiIndex::unit(1, 2)}) == 6.0);
  CHECK(c.coeff({2, MultiIndex::unit(1, 1)}) == 12.0);
  CHECK(c.coeff({3, {}}) == 8.0);
  CHECK(c.terms().size() == 4);
}

TEST_CASE("property: exact residual vanishes over the rationals") {
  Rng r(61);
  const int D = 10, n = 3;
  for (int k = 0; k < 25; ++k) {
    auto pb = random_problem<Q>(r, n, D);
    auto u = ck_solve(pb, D, n);
    REQUIRE(ck_residual(pb, u, D, n).is_zero());
    REQUIRE(ck_initial_mismatch(pb, u, D, n).is_zero());
  }
}

TEST_CASE("property: the majorant solution dominates coefficientwise") {
  Rng r(62);
  const int D = 8, n = 2;
  for (int k = 0; k < 20; ++k) {
    auto pb = random_problem<double>(r, n, D);
    S u = ck_solve(pb, D, n), m = ck_solve(majorant_problem(pb), D, n);
    for (auto& [key, c] : u.terms()) REQUIRE(std::abs(c) <= m.coeff(key) * (1 + 1e-12) + 1e-12);
  }
}

TEST_CASE("property: extra spatial variables act as parameters when they carry no derivative") {
  Rng r(63);
  const int D = 8;
  for (int k = 0; k < 20; ++k) {
    auto pb = random_problem<Q>(r, 3, D);
    // drop A_3 so that x_3 only enters through the coefficients and the data
    std::erase_if(pb.A, [](auto& p) { return p.first == 3; });
    auto full = ck_solve(pb, D, 3), two = ck_solve(pb, D, 2);
    REQUIRE(full.restricted(2) == two);
  }
  // With A_2 = 1 and Phi = x_2 the restricted solve cannot see t from x_2 + t.
  LinearCauchyProblem<double> pb;
  pb.A.emplace_back(2, S::constant(1.0, D));
  pb.Phi = S::x(2, D);
  CHECK(ck_solve(pb, D, 2).restricted(1) == S::t_var(D));
  CHECK(ck_solve(pb, D, 1).is_zero());
}

TEST_CASE("convergence certificates") {
  const int D = 24;
  MajorantFrame f = frame_pow2(4);
  LinearCauchyProblem<double> poly;
  poly.A.emplace_back(1, S::constant(1.0, D));
  poly.Phi = S::x(1, D);
  CHECK(convergence_certificate(poly, f, D, 1).entire);

  LinearCauchyProblem<double> geo;
  geo.A.emplace_back(1, S::constant(1.0, D));
  geo.Phi = geometric_x1(D);
  Certificate c = convergence_certificate(geo, f, D, 1);
  CHECK_FALSE(c.entire);
  CHECK(c.radius <= 2.0);
  CHECK(c.radius == doctest::Approx(1.0).epsilon(0.1));

  // only even total degrees occur, so the ratio test has nothing to compare
  LinearCauchyProblem<double> even;
  even.A0 = S::x(1, D);
  even.Phi = S(D);
  for (int k = 0; 2 * k <= D; ++k) even.Phi.add({0, k ? MultiIndex::unit(1, 2 * k) : MultiIndex{}}, 1.0);
  try {
    convergence_certificate(even, f, D, 1);
    FAIL("expected RatioTestInconclusive");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RatioTestInconclusive);
  }
}
