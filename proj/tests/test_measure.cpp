#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "doctest.h"
#include "ell2/errors.hpp"
#include "ell2/measure.hpp"
#include "generators.hpp"

using namespace ell2;

namespace {

WeightSequence unit_first() { return WeightSequence({1.0}, PowerGeometric::geometric(1.0, 0.5)); }

ShiftedGaussianPair pair(double r, double s, TailedPoint x1, TailedPoint x2) {
  return {WeightSequence::geometric(8), r, s, std::move(x1), std::move(x2)};
}

TailedPoint zero_point() { return {{}, PowerGeometric::zero()}; }

}  // namespace

TEST_CASE("hellinger_1d oracles") {
  CHECK(hellinger_1d(1, 1, 1, 0, 2) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(hellinger_1d(1, 1, 2, 0, 0) == doctest::Approx(std::sqrt(0.8)).epsilon(1e-14));
  CHECK(hellinger_1d(0.3, 1.7, 1.7, -0.4, -0.4) == 1.0);
}

TEST_CASE("property: hellinger_1d is symmetric, at most 1, and matches quadrature") {
  Rng r(21);
  for (int k = 0; k < 50; ++k) {
    double a = gen::real(r, 0.2, 2), rr = gen::real(r, 0.5, 2), s = gen::real(r, 0.5, 2);
    double x1 = gen::real(r, -2, 2), x2 = gen::real(r, -2, 2);
    double h = hellinger_1d(a, rr, s, x1, x2);
    REQUIRE(h == doctest::Approx(hellinger_1d(a, s, rr, x2, x1)).epsilon(1e-15));
    REQUIRE(h <= 1.0);
    REQUIRE(h > 0.0);
    auto f = [&](double x) {
      double p = std::exp(-0.5 * std::pow((x - x1) / (rr * a), 2)) / (rr * a);
      double q = std::exp(-0.5 * std::pow((x - x2) / (s * a), 2)) / (s * a);
      return std::sqrt(p * q / (2 * M_PI));
    };
    double quad = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -INFINITY, INFINITY, 15, 1e-13);
    REQUIRE(std::abs(quad - h) <= 1e-8);
  }
}

TEST_CASE("hellinger_product oracles") {
  CHECK(hellinger_product(pair(1, 2, zero_point(), zero_point())) == 0.0);
  // x1_i = a_i^2, x2 = 0: prod exp(-a_i^2 / 8) = exp(-1/24)
  TailedPoint x1;
  for (int i = 1; i <= 8; ++i) x1.head.push_back(std::ldexp(1.0, -2 * i));
  x1.tail = PowerGeometric::geometric(1.0, 0.25);
  double h = hellinger_product(pair(1, 1, x1, zero_point()));
  CHECK(h == doctest::Approx(std::exp(-1.0 / 24)).epsilon(1e-12));
}

TEST_CASE("classify_pair branches") {
  CHECK(classify_pair(pair(1, 2, zero_point(), zero_point())).verdict == Verdict::Singular);
  TailedPoint sq{{0.25, 0.0625}, PowerGeometric::geometric(1.0, 0.25)};
  CHECK(classify_pair(pair(1, 1, sq, zero_point())).verdict == Verdict::Equivalent);
  TailedPoint lin{{0.5, 0.25}, PowerGeometric::geometric(1.0, 0.5)};
  DichotomyVerdict v = classify_pair(pair(1, 1, lin, zero_point()));
  CHECK(v.verdict == Verdict::Singular);
  CHECK(std::isinf(v.tail_sum));
  CHECK(v.hellinger == 0.0);
  // a finitely supported shift is always equivalent
  TailedPoint finite{{0.5}, std::nullopt};
  CHECK(classify_pair(pair(1, 1, finite, zero_point())).verdict == Verdict::Equivalent);
  // an infinite shift against weights known only through their head
  ShiftedGaussianPair headless{WeightSequence({0.5}, std::nullopt), 1, 1, lin, zero_point()};
  try {
    classify_pair(headless);
    FAIL("expected TailNotCertified");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TailNotCertified);
  }
  TailedPoint other{{}, PowerGeometric::geometric(1.0, 0.25)};
  CHECK_THROWS_AS(classify_pair(pair(1, 1, lin, other)), Error);
}

TEST_CASE("property: verdict agrees with the sign of the Hellinger product") {
  Rng r(22);
  for (int k = 0; k < 100; ++k) {
    double rr = gen::real(r, 0.5, 2);
    double s = gen::integer(r, 0, 1) ? rr : gen::real(r, 0.5, 2);
    double q = gen::integer(r, 0, 1) ? 0.25 : 0.5;
    TailedPoint x1{{gen::real(r, -1, 1), gen::real(r, -1, 1)}, PowerGeometric::geometric(gen::real(r, -1, 1), q)};
    TailedPoint x2{{gen::real(r, -1, 1)}, PowerGeometric::zero()};
    auto p = pair(rr, s, x1, x2);
    REQUIRE((classify_pair(p).verdict == Verdict::Equivalent) == (hellinger_product(p) > 0.0));
  }
}

TEST_CASE("translation densities") {
  ProductGaussian g{unit_first(), 1.0};
  CHECK(rn_translation(g, 1, 1.0, TruncatedPoint({0.0})) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(rn_translation(g, 1, -1.0, TruncatedPoint({1.0})) == doctest::Approx(std::exp(0.5)).epsilon(1e-15));
}

TEST_CASE("property: translation identity holds exactly, and by Monte Carlo") {
  Rng r(23);
  ProductGaussian g{WeightSequence::geometric(8), 1.0};
  for (int k = 0; k < 20; ++k) {
    RealPoly p = gen::poly(r, 3, 4, 5);
    int i = gen::integer(r, 1, 3);
    double s = gen::real(r, -0.5, 0.5);
    auto [lhs, rhs] = rn_translation_sides(g, p, i, s);
    REQUIRE(lhs == doctest::Approx(rhs).epsilon(1e-12));
    if (k < 3) {
      SampleStream st;
      st.dims = 3;
      st = st.derived(k);
      Estimate e = mc_integrate(g, [&](const std::vector<double>& y) {
        return p.evaluate(y) * rn_translation(g, i, s, TruncatedPoint(y));
      }, st, 200000);
      REQUIRE(std::abs(e.mean - rhs) <= 5 * e.std_error + 1e-12);
    }
  }
}

TEST_CASE("dilation oracles") {
  ProductGaussian g{unit_first(), 1.0};
  auto [a, b] = dilation_check(g, 2.0, {{1, 0.0, 2.0}});
  CHECK(a == doctest::Approx(normal_cdf(1) - 0.5).epsilon(1e-14));
  CHECK(b == doctest::Approx(a).epsilon(1e-14));
  auto [c, d] = dilation_check(g, 0.5, {{1, -1.0, 1.0}});
  CHECK(c == doctest::Approx(2 * normal_cdf(2) - 1).epsilon(1e-14));
  CHECK(d == doctest::Approx(c).epsilon(1e-14));
}

TEST_CASE("Fernique closed form and threshold") {
  ProductGaussian g{WeightSequence::geometric(8), 1.0};
  FerniqueResult f = fernique_integral(g, 1.0);
  CHECK(f.finite);
  CHECK(f.threshold == 2.0);
  CHECK(f.value == doctest::Approx(1.5440955375336629).epsilon(1e-12));  // frozen
  CHECK(f.value == doctest::Approx(1.544).epsilon(1e-3));
  CHECK_FALSE(fernique_integral(g, 2.0).finite);
  CHECK(fernique_integral(g, std::nextafter(2.0, 0.0)).finite);
  CHECK_FALSE(fernique_integral(g, 0.1, 3.0).finite);
  CHECK(fernique_integral(g, -1.0).value < 1.0);
}

TEST_CASE("Monte Carlo integration") {
  ProductGaussian g{WeightSequence::geometric(8), 1.0};
  SampleStream st;
  Estimate e = mc_integrate(g, [](const std::vector<double>& x) { return x[0] * x[0]; }, st, 100000);
  CHECK(std::abs(e.mean - 0.25) <= 4 * e.std_error);
  CHECK_THROWS_AS(mc_integrate(g, [](const std::vector<double>&) { return NAN; }, st, 10), Error);
}

TEST_CASE("open balls have positive measure") {
  ProductGaussian g{WeightSequence::geometric(8), 1.0};
  SampleStream st;
  PositivityEstimate big = positivity_smoke(g, TruncatedPoint{}, 3.0, st, 20000);
  CHECK(std::abs(big.estimate - 1.0) <= 4 * big.std_error + 1e-12);
  PositivityEstimate small = positivity_smoke(g, TruncatedPoint{}, 0.5, st, 20000);
  CHECK(small.estimate > 0.0);
  PositivityEstimate far = positivity_smoke(g, TruncatedPoint({3.0, -2.0}), 0.2, st, 20000);
  CHECK(std::isfinite(far.log_estimate));
  CHECK(far.hits > 0);
}
