#include <gtest/gtest.h>

#include <sstream>

#include "tcprio/dataset.hpp"
#include "tcprio/errors.hpp"
#include "tcprio/experiment.hpp"
#include "tcprio/report.hpp"

using namespace tcprio;

namespace {

Dataset synth(std::size_t cycles, double flip = 0.02) {
  SynthConfig c;
  c.test_count = 30;
  c.cycle_count = cycles;
  c.noise_flip_probability = flip;
  c.seed = 5;
  return synth_generate(c);
}

ExperimentConfig config(AgentKind agent, std::size_t iterations) {
  ExperimentConfig c;
  c.agent = agent;
  c.iterations = iterations;
  c.agent_config.seed = 100;
  c.agent_config.history_length = 8;
  return c;
}

std::string results_csv(const ExperimentResult& r) {
  std::ostringstream out;
  write_results_csv(out, r);
  return out.str();
}

}  // namespace

TEST(Experiment, RandomAgentIsDeterministic) {
  const auto ds = synth(40);
  const auto c = config(AgentKind::kRandom, 1);
  EXPECT_EQ(results_csv(run_experiment(ds, c)), results_csv(run_experiment(ds, c)));
}

TEST(Experiment, IterationSeedsAreOffsets) {
  const auto ds = synth(10);
  const auto r = run_experiment(ds, config(AgentKind::kRandom, 3));
  ASSERT_EQ(r.iterations.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(r.iterations[k].iteration, k);
    EXPECT_EQ(r.iterations[k].seed, 100u + k);
  }
}

TEST(Experiment, MeanIsAverageOverIterations) {
  const auto ds = synth(30);
  const auto r = run_experiment(ds, config(AgentKind::kNetwork, 3));
  ASSERT_EQ(r.mean.size(), 30u);
  for (std::size_t i = 0; i < 30; ++i) {
    double sum = 0;
    for (const auto& it : r.iterations) sum += it.cycles[i].napfd;
    EXPECT_NEAR(r.mean.per_cycle[i].value, sum / 3.0, 1e-12);
  }
}

TEST(Experiment, SortingReachesOptimumOnNoiselessData) {
  // With the history of a single cycle the always-failing tests lead the
  // schedule; the best attainable value is 1 - F / (2 |schedule|).
  const auto ds = synth(12, 0.0);
  const auto r = run_iteration(ds, AgentKind::kSorting, config(AgentKind::kSorting, 1).agent_config, 0.5);
  for (std::size_t i = 2; i < r.cycles.size(); ++i) {
    const auto& o = r.cycles[i];
    EXPECT_EQ(o.detected, o.total_failures);
    EXPECT_NEAR(o.napfd, 1.0 - double(o.total_failures) / (2.0 * double(o.scheduled_count)), 1e-12);
  }
}

TEST(Experiment, ParallelWorkersMatchSerial) {
  const auto ds = synth(25);
  auto serial = config(AgentKind::kNetwork, 4);
  auto parallel = serial;
  parallel.workers = 3;
  EXPECT_EQ(results_csv(run_experiment(ds, serial)), results_csv(run_experiment(ds, parallel)));
}

TEST(Experiment, ValidateRejectsBadConfig) {
  auto c = config(AgentKind::kNetwork, 0);
  EXPECT_THROW(c.validate(), ConfigError);
  c = config(AgentKind::kNetwork, 1);
  c.budget_ratio = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Compare, SelfComparisonIsZero) {
  const auto ds = synth(35);
  const auto c = config(AgentKind::kNetwork, 2);
  const auto r = compare(ds, c, {c}, 30);
  ASSERT_EQ(r.baselines.size(), 1u);
  ASSERT_EQ(r.baselines[0].groups.size(), 2u);
  for (const auto& g : r.baselines[0].groups) EXPECT_EQ(g.difference, 0.0);
}

TEST(Compare, PartitionOf303Cycles) {
  const auto ds = synth(303);
  const auto r = compare(ds, config(AgentKind::kSorting, 1), {config(AgentKind::kRandom, 1)}, 30);
  const auto& g = r.baselines[0].groups;
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g.back().size, 3u);
}

TEST(Compare, MismatchedConfigsAreRejected) {
  const auto ds = synth(5);
  auto a = config(AgentKind::kNetwork, 1);
  auto b = config(AgentKind::kRandom, 1);
  b.budget_ratio = 0.3;
  EXPECT_THROW(compare(ds, a, {b}), ConfigError);
  b = config(AgentKind::kRandom, 1);
  b.dataset_path = "other.csv";
  EXPECT_THROW(compare(ds, a, {b}), ConfigError);
}

TEST(Report, ResultsHeaderAndRowCount) {
  const auto ds = synth(4);
  const auto csv = results_csv(run_experiment(ds, config(AgentKind::kRandom, 2)));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "agent,reward,iteration,cycle,napfd,scheduled_count,detected,total_failures");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 4);
}
