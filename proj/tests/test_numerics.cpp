#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "doctest.h"
#include "ell2/errors.hpp"
#include "ell2/numerics.hpp"
#include "ell2/polynomial.hpp"
#include "ell2/sampling.hpp"
#include "generators.hpp"

using namespace ell2;
using Q = boost::multiprecision::cpp_rational;

TEST_CASE("gaussian moments") {
  CHECK(gaussian_moment(4, 2.0) == 48.0);
  CHECK(gaussian_moment(3, 2.0) == 0.0);
  CHECK(gaussian_moment(0, 0.7) == 1.0);
  CHECK(gaussian_moment(2, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  // cross-check against quadrature of x^6 times the density
  double q = gauss_legendre_composite([](double x) { return std::pow(x, 6) * normal_pdf(x / 1.5) / 1.5; }, -20, 20, 40);
  CHECK(q == doctest::Approx(gaussian_moment(6, 1.5)).epsilon(1e-12));
}

TEST_CASE("integrate x_1^2 against P_1 with a_1 = 0.5") {
  WeightSequence w = WeightSequence::geometric(8);
  CHECK(integrate_polynomial(RealPoly::var(1) * RealPoly::var(1), w, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("weight sequences") {
  WeightSequence w = WeightSequence::geometric(8);
  CHECK(w.a(1) == 0.5);
  CHECK(w.a(12) == std::ldexp(1.0, -12));
  CHECK(w.sup() == 0.5);
  CHECK(w.power_sum(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(w.power_sum(1) == doctest::Approx(1.0).epsilon(1e-14));
  WeightSequence h({0.5, 0.25}, std::nullopt);
  CHECK_THROWS_AS(h.a(3), Error);
}

TEST_CASE("d_p distance") {
  CHECK(dp_distance(TruncatedPoint({0.3, 0.4}), TruncatedPoint{}, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(dp_distance(TruncatedPoint({1.0, -0.5}), TruncatedPoint({1.0}), 1.0) == doctest::Approx(0.5));
  CHECK(dp_distance(TruncatedPoint({1.0, -2.0}), TruncatedPoint({1.0}), 1.0) == 1.0);
  CHECK(dp_distance(TruncatedPoint({3.0, 0.0}), TruncatedPoint{}, 2.0) == 1.0);
}

TEST_CASE("gauge of points near infinity") {
  TailedPoint v;
  for (int i = 1; i <= 5; ++i) v.head.push_back(std::ldexp(1.0, i));
  v.tail = PowerGeometric::geometric(1.0, 2.0);
  CHECK(near_infinity_gauge(v, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

  TailedPoint lin;
  for (int i = 1; i <= 10; ++i) lin.head.push_back(i);
  lin.tail = PowerGeometric::power(1.0, 1.0);
  CHECK(near_infinity_gauge(lin, 2.0) == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-10));

  TailedPoint z{{1.0, 0.0}, PowerGeometric::geometric(1.0, 2.0)};
  CHECK_THROWS_AS(near_infinity_gauge(z, 1.0), Error);
  TailedPoint bounded{{1.0}, PowerGeometric::geometric(1.0, 1.0)};
  CHECK(std::isinf(near_infinity_gauge(bounded, 1.0)));
}

TEST_CASE("power-geometric sums") {
  PowerGeometric g = PowerGeometric::geometric(1.0, 0.5);
  CHECK(g.sum_from(1) == doctest::Approx(1.0));
  CHECK(g.sum_from(3) == doctest::Approx(0.25));
  CHECK(std::isinf(PowerGeometric::power(1.0, -1.0).sum_from(1)));
  CHECK(PowerGeometric::power(1.0, -2.0).sum_from(1) == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-10));
}

TEST_CASE("property: exact Gaussian integration by parts, rational arithmetic") {
  // E[D_i p * q] = E[p * (x_i q / a_i^2 - D_i q)] holds exactly over Q.
  Rng r(11);
  auto var = [](int i) { return Q(1, 1 << (2 * i)); };  // a_i^2 = 4^{-i}
  for (int trial = 0; trial < 100; ++trial) {
    auto p = gen::poly_as<Q>(r, 3, 4, 4), q = gen::poly_as<Q>(r, 3, 4, 4);
    int i = gen::integer(r, 1, 3);
    Q inv = Q(1 << (2 * i));
    auto lhs = (p.derivative(i) * q).integrate(var);
    auto rhs = (p * (q.times_var(i).scaled(inv) - q.derivative(i))).integrate(var);
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("property: polynomial ring laws") {
  Rng r(12);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = gen::poly_as<Q>(r, 3, 3, 3), b = gen::poly_as<Q>(r, 3, 3, 3), c = gen::poly_as<Q>(r, 3, 3, 3);
    REQUIRE(a * (b + c) == a * b + a * c);
    REQUIRE((a * b).derivative(2) == a.derivative(2) * b + a * b.derivative(2));
    Q s(gen::integer(r, -3, 3), 2);
    REQUIRE(a.shifted(1, s).shifted(1, -s) == a);
  }
}

TEST_CASE("property: shifted expectation matches shifted polynomial") {
  Rng r(13);
  WeightSequence w = WeightSequence::geometric(8);
  for (int trial = 0; trial < 50; ++trial) {
    RealPoly p = gen::poly(r, 4, 4, 5);
    int i = gen::integer(r, 1, 4);
    double s = gen::real(r, -1, 1);
    double a = integrate_shifted(p, w, 1.0, i, s);
    double b = integrate_polynomial(p.shifted(i, -s), w, 1.0);
    REQUIRE(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("Gauss-Legendre is exact for degree 63") {
  double v = gauss_legendre([](double x) { return std::pow(x, 62); }, -1, 1);
  CHECK(v == doctest::Approx(2.0 / 63).epsilon(1e-13));
}

TEST_CASE("chunked Monte Carlo is independent of the worker count") {
  SampleStream st;
  st.chunk_size = 1000;
  auto draw = [](Rng& g) { return std::normal_distribution<double>()(g); };
  int saved = worker_count();
  set_worker_count(1);
  Estimate a = mc_mean(st, 20000, draw);
  set_worker_count(3);
  Estimate b = mc_mean(st, 20000, draw);
  set_worker_count(saved);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(std::abs(a.mean) < 4 * a.std_error);
  SampleStream other = st.derived(1);
  CHECK(mc_mean(other, 20000, draw).mean != a.mean);
}
