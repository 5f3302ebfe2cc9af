#include <benchmark/benchmark.h>

#include <random>

#include "tcprio/agents.hpp"
#include "tcprio/dataset.hpp"
#include "tcprio/evaluation.hpp"
#include "tcprio/experiment.hpp"
#include "tcprio/neural_model.hpp"
#include "tcprio/tree_model.hpp"

namespace {

using namespace tcprio;

CiCycle random_cycle(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dur(0.1, 10.0);
  std::bernoulli_distribution fail(0.2);
  std::vector<TestCaseRecord> recs;
  for (std::size_t i = 0; i < n; ++i) {
    recs.push_back({TestId("t" + std::to_string(i)), dur(rng),
                    fail(rng) ? Status::kFailed : Status::kPassed, 0});
  }
  return CiCycle(0, std::move(recs));
}

std::vector<Experience> random_batch(std::size_t n, std::size_t history) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::bernoulli_distribution coin(0.3);
  std::vector<Experience> out(n);
  for (auto& e : out) {
    e.state.normalized_duration = u(rng);
    e.state.recency = u(rng);
    for (std::size_t k = 0; k < history; ++k) e.state.failure_history.push_back(coin(rng));
    e.reward = e.state.failure_history[0];
  }
  return out;
}

void BM_BuildSchedule(benchmark::State& state) {
  const auto cycle = random_cycle(static_cast<std::size_t>(state.range(0)), 1);
  const auto prio = baseline_random(cycle, 2);
  for (auto _ : state) benchmark::DoNotOptimize(build_schedule(prio, cycle, 0.5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildSchedule)->Arg(100)->Arg(2000);

void BM_Napfd(benchmark::State& state) {
  const auto cycle = random_cycle(static_cast<std::size_t>(state.range(0)), 1);
  const auto sched = build_schedule(baseline_random(cycle, 2), cycle, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(napfd(sched, cycle, cycle.failure_count()));
}
BENCHMARK(BM_Napfd)->Arg(100)->Arg(2000);

void BM_FitNeural(benchmark::State& state) {
  const auto batch = random_batch(1000, 4);
  NeuralModel model(6, {static_cast<std::size_t>(state.range(0))}, 1);
  NeuralTrainOptions opt;
  for (auto _ : state) benchmark::DoNotOptimize(fit_neural(model, batch, opt));
}
BENCHMARK(BM_FitNeural)->Arg(12)->Arg(32)->Arg(100);

void BM_FitTree(benchmark::State& state) {
  const auto batch = random_batch(static_cast<std::size_t>(state.range(0)), 25);
  for (auto _ : state) benchmark::DoNotOptimize(fit_tree(batch, TreeParams{}));
}
BENCHMARK(BM_FitTree)->Arg(1000)->Arg(10000);

void BM_Iteration(benchmark::State& state) {
  SynthConfig sc;
  sc.cycle_count = 100;
  const auto ds = synth_generate(sc);
  AgentConfig cfg;
  cfg.history_length = 25;
  const auto agent = static_cast<AgentKind>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_iteration(ds, agent, cfg, 0.5));
  state.SetLabel(agent_name(agent));
}
BENCHMARK(BM_Iteration)
    ->Arg(static_cast<int>(AgentKind::kNetwork))
    ->Arg(static_cast<int>(AgentKind::kTree))
    ->Arg(static_cast<int>(AgentKind::kWeighting))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
