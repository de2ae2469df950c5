#include <benchmark/benchmark.h>

#include "krf/entropy.hpp"
#include "krf/flow.hpp"
#include "krf/functionals.hpp"
#include "krf/geometry.hpp"

using namespace krf;

namespace {

MetricProfile sample_profile(benchmark::State& state) {
  return perturbed_profile(Grid::from_nodes(static_cast<int>(state.range(0))), 0.1, 1);
}

void BM_Curvature(benchmark::State& state) {
  const auto p = sample_profile(state);
  for (auto _ : state) benchmark::DoNotOptimize(curvature(p));
}
BENCHMARK(BM_Curvature)->Arg(201)->Arg(401)->Arg(801);

void BM_Rk4Step(benchmark::State& state) {
  const auto p = sample_profile(state);
  const double dt = max_stable_dt(p, 0.2);
  for (auto _ : state) {
    FlowState s{0.0, p, 0.0};
    benchmark::DoNotOptimize(step(s, dt));
  }
}
BENCHMARK(BM_Rk4Step)->Arg(201)->Arg(401)->Arg(801);

void BM_Diameter(benchmark::State& state) {
  const auto p = sample_profile(state);
  for (auto _ : state) benchmark::DoNotOptimize(diameter(p));
}
BENCHMARK(BM_Diameter)->Arg(201)->Arg(401);

void BM_KEnergy(benchmark::State& state) {
  const auto p = sample_profile(state);
  for (auto _ : state) benchmark::DoNotOptimize(k_energy(p));
}
BENCHMARK(BM_KEnergy)->Arg(201)->Arg(401);

void BM_MinimizeW(benchmark::State& state) {
  const auto p = sample_profile(state);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_w(p));
}
BENCHMARK(BM_MinimizeW)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  const auto g = Grid::from_nodes(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_oracle(g));
}
BENCHMARK(BM_Spectrum)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
