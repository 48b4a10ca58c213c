#include <benchmark/benchmark.h>

#include "ell2/ck.hpp"
#include "ell2/cutoff.hpp"
#include "ell2/dbar.hpp"
#include "ell2/measure.hpp"
#include "ell2/polynomial.hpp"
#include "ell2/surface.hpp"

using namespace ell2;

namespace {

const WeightSequence W = WeightSequence::geometric(8);

// (1 + x_1 + ... + x_d)^deg
RealPoly dense_poly(int d, int deg) {
  RealPoly lin(1.0);
  for (int i = 1; i <= d; ++i) lin = lin + RealPoly::var(i);
  RealPoly p(1.0);
  for (int k = 0; k < deg; ++k) p = p * lin;
  return p;
}

void BM_integrate_polynomial(benchmark::State& st) {
  RealPoly p = dense_poly(4, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(integrate_polynomial(p, W, 1.0));
  st.counters["terms"] = static_cast<double>(p.terms().size());
}
BENCHMARK(BM_integrate_polynomial)->Arg(2)->Arg(4)->Arg(6);

void BM_hellinger_product(benchmark::State& st) {
  TailedPoint x{{0.25, 0.0625}, PowerGeometric::geometric(1.0, 0.25)};
  ShiftedGaussianPair pair{W, 1.0, 1.0, x, TailedPoint{}};
  for (auto _ : st) benchmark::DoNotOptimize(hellinger_product(pair));
}
BENCHMARK(BM_hellinger_product);

void BM_ck_solve(benchmark::State& st) {
  const int D = static_cast<int>(st.range(0));
  LinearCauchyProblem<double> pb;
  pb.A0 = MonomialSeries<double>::x(1, D);
  pb.A.emplace_back(1, MonomialSeries<double>::constant(2.0, D));
  pb.A.emplace_back(2, MonomialSeries<double>::x(3, D));
  pb.Phi = MonomialSeries<double>::x(2, D);
  for (auto _ : st) benchmark::DoNotOptimize(ck_solve(pb, D, 3));
}
BENCHMARK(BM_ck_solve)->Arg(8)->Arg(12)->Arg(16);

void BM_basic_estimate(benchmark::State& st) {
  Form f(0, 1);
  f.add({}, {1}, CPoly::monomial(CMono::zbar(2)) + CPoly(1.0));
  f.add({}, {2}, CPoly::monomial(CMono::zbar(1)) + CPoly::monomial(CMono::z(3, 2)));
  for (auto _ : st) benchmark::DoNotOptimize(basic_estimate_check(f, W, 1.0));
}
BENCHMARK(BM_basic_estimate);

void BM_solve_dbar(benchmark::State& st) {
  Form f(0, 1);
  f.add({}, {1}, CPoly::monomial(CMono::zbar(1)) + CPoly::monomial(CMono::z(1, 2)));
  const int cap = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(solve_dbar(f, W, 1.0, cap, 1));
}
BENCHMARK(BM_solve_dbar)->Arg(4)->Arg(8);

void BM_cutoff_g(benchmark::State& st) {
  CutoffConfig cc;
  cc.samples = st.range(0);
  CutoffSystem cut(cc);
  std::vector<double> x(cut.dims(), 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(cut.g(cut.N1() + 1, x));
}
BENCHMARK(BM_cutoff_g)->Arg(10000)->Arg(100000);

void BM_gauss_green_exact(benchmark::State& st) {
  GaussGreenDomain h;
  h.dims = 3;
  RealPoly f = dense_poly(3, 3);
  for (auto _ : st) benchmark::DoNotOptimize(gauss_green_exact(W, h, f, 1));
}
BENCHMARK(BM_gauss_green_exact);

}  // namespace

BENCHMARK_MAIN();
