#include <benchmark/benchmark.h>

#include <random>

#include "shiftapprox/certify.hpp"
#include "shiftapprox/oracle.hpp"
#include "shiftapprox/splines.hpp"

using namespace shiftapprox;

namespace {

void BM_TruncateBSpline(benchmark::State& state) {
  const auto k = KernelSpec::bspline(8, 3);
  for (auto _ : state) benchmark::DoNotOptimize(truncate(k, state.range(0)));
}
BENCHMARK(BM_TruncateBSpline)->Arg(256)->Arg(1024)->Arg(4096);

void BM_FullBasis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ShiftSpaceSpec space{KernelSpec::bspline(n, 3), n, SpaceVariant::Full, 0};
  for (auto _ : state) benchmark::DoNotOptimize(basis(space, 1024));
}
BENCHMARK(BM_FullBasis)->Arg(2)->Arg(8)->Arg(32);

void BM_Project(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto f = random_class_sample(ClassVariant::H0, 40, rng);
  const ShiftSpaceSpec space{KernelSpec::bspline(8, 3), 8, SpaceVariant::Sym0, 7};
  const auto b = basis(space, 1024);
  for (auto _ : state) benchmark::DoNotOptimize(project(f, b));
}
BENCHMARK(BM_Project);

void BM_CertifyTheorem1(benchmark::State& state) {
  const auto k = KernelSpec::bspline(8, 3);
  CertifyOptions opt;
  opt.cutoff = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(check_theorem1(k, 8, 8, 2, opt));
}
BENCHMARK(BM_CertifyTheorem1)->Arg(256)->Arg(1024)->Arg(4096);

void BM_WorstCaseRatio(benchmark::State& state) {
  const int n = 4;
  const RatioProblem p{{KernelSpec::bspline(n, 2), n, SpaceVariant::CrossM, n},
                       {ClassVariant::Periodic, 3}, state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(worst_case_ratio(p));
}
BENCHMARK(BM_WorstCaseRatio)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_SplineDimension(benchmark::State& state) {
  const SplineSpaceSpec spec{3, 0, 5, KnotParity::Integer};
  for (auto _ : state) benchmark::DoNotOptimize(dimension_check(spec, 2560));
}
BENCHMARK(BM_SplineDimension)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
