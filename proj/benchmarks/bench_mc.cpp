#include <benchmark/benchmark.h>

#include "noisectl/mc.hpp"

namespace {

using namespace noisectl;

MCConfig short_run(Integrator integrator) {
  MCConfig cfg;
  cfg.n_paths = 16;
  cfg.t_end = 10.0;
  cfg.burn_in = 5.0;
  cfg.integrator = integrator;
  return cfg;
}

void BM_OU(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(simulate_ou(0.25, 1e-3, 100000, 7).back());
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_OU);

void BM_SddeHeun(benchmark::State& state) {
  const ScalarModel model = presets::bistable();
  const MCConfig cfg = short_run(Integrator::Heun);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_sdde(model, {1.0, 0.1, 1.0}, cfg).n_samples);
  state.SetItemsProcessed(state.iterations() * 16 * 10000);
}
BENCHMARK(BM_SddeHeun)->Unit(benchmark::kMillisecond);

void BM_SddeEuler(benchmark::State& state) {
  const ScalarModel model = presets::bistable();
  const MCConfig cfg = short_run(Integrator::Euler);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_sdde(model, {1.0, 0.1, 1.0}, cfg).n_samples);
  state.SetItemsProcessed(state.iterations() * 16 * 10000);
}
BENCHMARK(BM_SddeEuler)->Unit(benchmark::kMillisecond);

void BM_Rescaled(benchmark::State& state) {
  const ScalarModel model = presets::bistable();
  const MCConfig cfg = short_run(Integrator::Heun);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_rescaled(model, {1.0, 0.1, 1.0}, cfg).n_samples);
  state.SetItemsProcessed(state.iterations() * 16 * 10000);
}
BENCHMARK(BM_Rescaled)->Unit(benchmark::kMillisecond);

void BM_DelayBuffer(benchmark::State& state) {
  DelayBuffer buf(0.4, 1e-3, 1.0);
  double x = 0.0;
  for (auto _ : state) {
    x = 0.999 * buf.delayed() + 1e-3;
    buf.push(x);
  }
  benchmark::DoNotOptimize(x);
}
BENCHMARK(BM_DelayBuffer);

}  // namespace

BENCHMARK_MAIN();
