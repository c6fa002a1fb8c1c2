#include <benchmark/benchmark.h>

#include "noisectl/analysis.hpp"
#include "noisectl/fpe.hpp"

namespace {

using namespace noisectl;

void BM_SolveBistableM2(benchmark::State& state) {
  const ScalarModel model = presets::bistable();
  const QuadratureGrid grid(model.domain, static_cast<std::size_t>(state.range(0)));
  const EffectiveSystem sys = make_effective(model, {1.0, 0.1, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(solve_stationary(sys, ClosureOrder::Two, {}, grid).R);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveBistableM2)->Arg(1001)->Arg(4001)->Arg(16001)->Complexity();

void BM_SolveLaserM2(benchmark::State& state) {
  const ScalarModel model = presets::laser();
  const QuadratureGrid grid(model.domain);
  const EffectiveSystem sys = make_effective(model, {4.0, 0.05, 42.0});
  for (auto _ : state) benchmark::DoNotOptimize(solve_stationary(sys, ClosureOrder::Two, {}, grid).R);
}
BENCHMARK(BM_SolveLaserM2);

void BM_SelfConsistency(benchmark::State& state) {
  const ScalarModel model = presets::bistable();
  const QuadratureGrid grid(model.domain);
  const EffectiveSystem sys = as_effective(model);
  for (auto _ : state) benchmark::DoNotOptimize(self_consistency_I(sys, ClosureOrder::Two, -2.0, grid));
}
BENCHMARK(BM_SelfConsistency);

void BM_ClassifyRegime(benchmark::State& state) {
  const ScalarModel model = presets::bistable();
  const QuadratureGrid grid(model.domain);
  const StationaryPDF pdf = solve_stationary(make_effective(model, {1.0, 0.4, 1.0}), ClosureOrder::Two, {}, grid);
  for (auto _ : state) benchmark::DoNotOptimize(classify_regime(pdf).inflection_count);
}
BENCHMARK(BM_ClassifyRegime);

void BM_CancelDrift(benchmark::State& state) {
  const ScalarModel model = presets::bistable(1.4, 0.2);
  const QuadratureGrid grid(model.domain);
  for (auto _ : state)
    benchmark::DoNotOptimize(cancel_peak_drift(model, 1.0, 0.1, 1.0, ClosureOrder::Two, {}, grid).xhat);
}
BENCHMARK(BM_CancelDrift)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
