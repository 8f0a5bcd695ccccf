#include <benchmark/benchmark.h>

#include "divrate/bandwidth.hpp"
#include "divrate/kernels.hpp"
#include "divrate/rng.hpp"

namespace {

using namespace divrate;

SizeSample make_sample(std::size_t n) {
  SplitMix64 rng(123);
  SizeSample s;
  s.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) s.values.push_back(4.0 * rng.next_double());
  return s;
}

void BM_DensityFast(benchmark::State& state) {
  const auto s = make_sample(static_cast<std::size_t>(state.range(0)));
  const double h = static_cast<double>(state.range(1)) / 1000.0;
  UniformGrid grid(0.0, 4.0, 1001);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_density(s, h, grid));
}

void BM_DensityNaive(benchmark::State& state) {
  const auto s = make_sample(static_cast<std::size_t>(state.range(0)));
  const double h = static_cast<double>(state.range(1)) / 1000.0;
  UniformGrid grid(0.0, 4.0, 1001);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_density_naive(s, h, grid));
}

void BM_DensitySelection(benchmark::State& state) {
  const auto s = make_sample(static_cast<std::size_t>(state.range(0)));
  UniformGrid grid(0.0, 4.0, 1001);
  const auto H = build_bandwidth_grid(s.n(), BandwidthKind::density);
  const auto kernel = KernelSpec::gaussian();
  GLConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(gl_criterion_density(s, H, cfg, kernel, grid));
}

}  // namespace

BENCHMARK(BM_DensityFast)->Args({20000, 20})->Args({20000, 200});
BENCHMARK(BM_DensityNaive)->Args({20000, 20})->Args({20000, 200});
BENCHMARK(BM_DensitySelection)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
