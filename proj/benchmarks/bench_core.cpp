#include <benchmark/benchmark.h>

#include "lsmdp/coefficients.hpp"
#include "lsmdp/exact_solver.hpp"
#include "lsmdp/objectives.hpp"
#include "lsmdp/policies.hpp"
#include "lsmdp/search_space.hpp"
#include "lsmdp/simulator.hpp"

using namespace lsmdp;

static void BM_ClassifyAnnealing(benchmark::State& state) {
  const LocalSearchMdp mdp(make_onemax(static_cast<int>(state.range(0))));
  const auto sa = simulated_annealing(10.0, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(classify(sa, mdp).delta_star);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(mdp.num_states()));
}
BENCHMARK(BM_ClassifyAnnealing)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_Freeze(benchmark::State& state) {
  const LocalSearchMdp mdp(make_nk_landscape(static_cast<int>(state.range(0)), 3, 1));
  const auto sa = simulated_annealing(2.0, 0.95);
  TimeIndex t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(freeze(sa, mdp, t++ % 50).reward.data());
}
BENCHMARK(BM_Freeze)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_ValueIteration(benchmark::State& state) {
  const LocalSearchMdp mdp(make_trap(static_cast<int>(state.range(0)), 4));
  for (auto _ : state) benchmark::DoNotOptimize(value_iteration(mdp, 0.9, 1e-10).value.values.data());
}
BENCHMARK(BM_ValueIteration)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_RunBatch(benchmark::State& state) {
  const LocalSearchMdp mdp(make_onemax(32));
  BatchOptions options;
  options.horizon = 1000;
  options.num_trajectories = static_cast<std::size_t>(state.range(0));
  const auto sa = simulated_annealing(5.0, 0.995);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch(sa, mdp, StartRule::uniform(), options).summary.best_mean);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}
BENCHMARK(BM_RunBatch)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
