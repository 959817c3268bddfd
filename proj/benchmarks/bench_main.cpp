#include <benchmark/benchmark.h>

#include "unrest/analysis.hpp"
#include "unrest/integrator.hpp"
#include "unrest/model.hpp"
#include "unrest/scenario_io.hpp"

using namespace unrest;

namespace {

void BM_Classify(benchmark::State& state) {
  const ModelParams p(0.98, 0.05, kDefaultEnthusiasm, kDefaultPolicingEfficiency);
  for (auto _ : state) benchmark::DoNotOptimize(classify_region(p));
}
BENCHMARK(BM_Classify);

void BM_Equilibria(benchmark::State& state) {
  const ModelParams p(0.98, 0.05, kDefaultEnthusiasm, kDefaultPolicingEfficiency);
  for (auto _ : state) benchmark::DoNotOptimize(equilibria(p));
}
BENCHMARK(BM_Equilibria);

void BM_Scenario(benchmark::State& state, const char* name) {
  const ScenarioSpec spec = *find_builtin(name);
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(spec).final_r());
}
BENCHMARK_CAPTURE(BM_Scenario, tunisia_alpha, "tunisia-alpha-0.98-beta-0.05")
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Scenario, tunisia_c1, "tunisia-c1-4.80")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Scenario, egypt, "egypt")->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  const AxisRange axis{0.01, 0.99, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sweep_regions(axis, axis, kDefaultEnthusiasm, kDefaultPolicingEfficiency, 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Sweep)->Arg(50)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
