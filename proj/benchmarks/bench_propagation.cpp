#include <benchmark/benchmark.h>

#include <numbers>

#include "cvent/network.hpp"
#include "cvent/polarization.hpp"

using namespace cvent;

namespace {

Network ladder(std::size_t modes) {
  std::vector<GaussianState> parts;
  for (std::size_t m = 0; m < modes; ++m) parts.push_back(new_squeezed_bright(1e3, 4.0, 1.2, std::to_string(m)));
  Network net;
  net.input = combine(parts);
  for (std::size_t m = 0; m + 1 < modes; ++m) {
    net.steps.push_back(BeamSplitter{m, m + 1, 0.5, std::numbers::pi / 2});
    net.steps.push_back(PhaseShift{m + 1, 0.3});
  }
  return net;
}

void BM_Propagate(benchmark::State& state) {
  const Network net = ladder(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(propagate(net));
}
BENCHMARK(BM_Propagate)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_StokesCovariance(benchmark::State& state) {
  const GaussianState s = propagate(ladder(4));
  for (auto _ : state) benchmark::DoNotOptimize(stokes_fluct_cov(s, {0, 1}));
}
BENCHMARK(BM_StokesCovariance);

}  // namespace
