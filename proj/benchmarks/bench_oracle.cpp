#include <benchmark/benchmark.h>

#include <numbers>

#include "cvent/mc_oracle.hpp"

using namespace cvent;

namespace {

void BM_OracleEpr(benchmark::State& state) {
  Network net;
  net.input = combine({new_squeezed_bright(1e3, 4.0, 1.0, "a"), new_squeezed_bright(1e3, 4.0, 1.0, "b")});
  net.steps.push_back(BeamSplitter{0, 1, 0.5, std::numbers::pi / 2});
  const GaussianState out = propagate(net);
  const std::vector<mc::Request> req{{"x", mc::Linear{quadrature_axis(out, 0, Quadrature::X)}},
                                     {"n", mc::Intensity{{{0, 1.0}, {1, 1.0}}}},
                                     {"s1", mc::Stokes{{{0, 1, 1, 1.0}}}}};
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc::estimate_variances(net, req, 1, n));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_OracleEpr)->Arg(10'000)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

}  // namespace
