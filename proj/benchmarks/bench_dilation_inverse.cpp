#include <benchmark/benchmark.h>

#include <cmath>

#include "divrate/dilation.hpp"

namespace {

using namespace divrate;

GridFunction bump(std::size_t m) {
  UniformGrid grid(0.0, 4.0, m);
  return GridFunction::tabulate(grid, [](double x) {
    const double t = (x - 0.8) / 0.2;
    return std::exp(-t * t);
  });
}

void BM_CellAverages(benchmark::State& state) {
  const auto phi = bump(4001);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dilation::cell_averages(phi, 4.0, k));
}

void BM_Invert(benchmark::State& state) {
  const auto phi = bump(4001);
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto cells = dilation::cell_averages(phi, 4.0, k);
  for (auto _ : state) benchmark::DoNotOptimize(dilation::invert(cells));
}

void BM_SeriesInverse(benchmark::State& state) {
  const auto phi = bump(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dilation::inverse_series(phi, 60));
}

}  // namespace

BENCHMARK(BM_CellAverages)->Arg(1024)->Arg(16384);
BENCHMARK(BM_Invert)->Arg(1024)->Arg(16384);
BENCHMARK(BM_SeriesInverse)->Arg(1001)->Arg(4001);

BENCHMARK_MAIN();
