#include <benchmark/benchmark.h>

#include <cmath>

#include "bgw/chain.hpp"
#include "bgw/generator.hpp"
#include "bgw/quadrature.hpp"
#include "bgw/sde.hpp"

using namespace bgw;

namespace {

void BM_ChainStep(benchmark::State& state) {
  const auto N = state.range(0);
  auto fam = build_survival_sexual(1.0, JumpMeasure::atom(1, 1), 0.5, 0.2, 0.2, N, double(N));
  Rng rng(1);
  ChainState z{N, 2 * N, 0};
  for (auto _ : state) {
    z = step(fam, z, rng);
    if (z.F == 0 || z.M == 0 || z.F + z.M > 4 * N) z = {N, 2 * N, 0};
    benchmark::DoNotOptimize(z);
  }
}
BENCHMARK(BM_ChainStep)->Arg(100)->Arg(1600)->Arg(25600);

void BM_SdeIntegrate(benchmark::State& state) {
  auto lim = survival_sexual_limit(1.0, JumpMeasure::density(DensityPart::power(1.0, -1.5, 0.0, 1.0)), 0.5, 0.2, 0.2);
  IntegrateOptions o;
  o.dt = 1e-3;
  SdeIntegrator in(build_limit_system(lim), o);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(in.integrate({1, 2}, 1.0, {1.0}, rng));
}
BENCHMARK(BM_SdeIntegrate)->Unit(benchmark::kMillisecond);

void BM_QuadratureSingular(benchmark::State& state) {
  auto f = [](double z) { return -std::log(z) / std::sqrt(z); };
  for (auto _ : state) benchmark::DoNotOptimize(integrate_interval(f, 0.0, 1.0, {}, QuadOptions{}));
}
BENCHMARK(BM_QuadratureSingular);

void BM_LimitingGenerator(benchmark::State& state) {
  auto lim = survival_sexual_limit(1.0, JumpMeasure::density(DensityPart::power(1.0, -1.5, 0.0, 2.0)), 0.5, 0.2, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(limiting_generator(lim, 2, 1, 0.7, 1.3));
}
BENCHMARK(BM_LimitingGenerator)->Unit(benchmark::kMicrosecond);

void BM_EmpiricalGenerator(benchmark::State& state) {
  auto fam = build_survival_sexual(1.0, JumpMeasure::atom(1, 1), 0.5, 0.2, 0.2, 1024, 1024.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(empirical_generator(fam, {{1, 0}, {1, 1}}, 0.5, 0.5, 4096, 1));
  }
}
BENCHMARK(BM_EmpiricalGenerator)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
