// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include <cmath>

#include "penplot/contour2d.hpp"
#include "penplot/surface3d.hpp"

namespace {

using namespace penplot;

double field(double x, double y) {
  return std::sin(5 * x) * std::cos(4 * y) * std::exp(-0.2 * (x * x + y * y));
}

void BM_SampleSerial(benchmark::State& state) {
  const Resolution res{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(serial::sample_scalar(field, {-3, 3}, {-3, 3}, res));
}

void BM_SampleParallel(benchmark::State& state) {
  const Resolution res{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(sample_scalar(field, {-3, 3}, {-3, 3}, res));
}

void BM_ContourSerial(benchmark::State& state) {
  const ScalarGrid g = serial::sample_scalar(field, {-3, 3}, {-3, 3}, {static_cast<int>(state.range(0))});
  const ContourLevelSet levels = choose_levels(g, 16);
  for (auto _ : state) benchmark::DoNotOptimize(serial::extract_contours(g, levels));
}

void BM_ContourParallel(benchmark::State& state) {
  const ScalarGrid g = serial::sample_scalar(field, {-3, 3}, {-3, 3}, {static_cast<int>(state.range(0))});
  const ContourLevelSet levels = choose_levels(g, 16);
  for (auto _ : state) benchmark::DoNotOptimize(extract_contours(g, levels));
}

}  // namespace

BENCHMARK(BM_SampleSerial)->Arg(128)->Arg(512)->Arg(2048);
BENCHMARK(BM_SampleParallel)->Arg(128)->Arg(512)->Arg(2048);
BENCHMARK(BM_ContourSerial)->Arg(128)->Arg(512);
BENCHMARK(BM_ContourParallel)->Arg(128)->Arg(512);

BENCHMARK_MAIN();
