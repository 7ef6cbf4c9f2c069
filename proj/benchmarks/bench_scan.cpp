#include <benchmark/benchmark.h>

#include <numbers>

#include "cvent/interferometry.hpp"

using namespace cvent;

namespace {

void BM_ThetaScan(benchmark::State& state) {
  const auto grid = linear_grid(0.0, 2.0 * std::numbers::pi, static_cast<std::size_t>(state.range(0)));
  const PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(scan_pipeline(cfg, grid));
}
BENCHMARK(BM_ThetaScan)->Arg(181)->Arg(1801)->Unit(benchmark::kMicrosecond);

void BM_MinResolvablePhase(benchmark::State& state) {
  const PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(min_resolvable_phase(cfg, std::numbers::pi / 3));
}
BENCHMARK(BM_MinResolvablePhase)->Unit(benchmark::kMicrosecond);

void BM_DenseCoding(benchmark::State& state) {
  const PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(dense_coding_readout(cfg, {1.0, 1.0}, 1.0));
}
BENCHMARK(BM_DenseCoding);

}  // namespace
