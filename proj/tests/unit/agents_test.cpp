#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "../support/fixtures.hpp"
#include "tcprio/agents.hpp"
#include "tcprio/dataset.hpp"
#include "tcprio/errors.hpp"
#include "tcprio/evaluation.hpp"

using namespace tcprio;
using tcprio::testing::make_cycle;

namespace {

// Replays `ds` through `agent` and returns the priorities of the last cycle.
PriorityAssignment replay(Prioritizer& agent, const Dataset& ds, std::size_t cycles,
                          RewardKind reward = RewardKind::kTestCaseFailure) {
  HistoryLog history;
  PriorityAssignment last;
  for (std::size_t i = 0; i < cycles; ++i) {
    const auto& c = ds.cycles[i];
    last = agent.prioritize(c, history);
    const auto s = build_schedule(last, c, 0.5);
    agent.observe_and_learn(c, s, compute_reward(reward, c, s), history);
    history.append(c);
  }
  return last;
}

Dataset small_synth(std::uint64_t seed) {
  SynthConfig sc;
  sc.test_count = 20;
  sc.cycle_count = 60;
  sc.noise_flip_probability = 0.0;
  sc.seed = seed;
  return synth_generate(sc);
}

}  // namespace

TEST(AgentNames, RoundTrip) {
  for (auto k : {AgentKind::kNetwork, AgentKind::kTree, AgentKind::kRandom, AgentKind::kSorting,
                 AgentKind::kWeighting}) {
    EXPECT_EQ(parse_agent_kind(agent_name(k)), k);
  }
  EXPECT_THROW(parse_agent_kind("oracle"), ConfigError);
  EXPECT_TRUE(is_learning(AgentKind::kTree));
  EXPECT_FALSE(is_learning(AgentKind::kSorting));
}

TEST(AgentConfig, ValidateRejectsOutOfRange) {
  AgentConfig c;
  c.history_length = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.exploration_decay = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.exploration_noise_std = -1;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(RetecsAgent, ZeroNetworkWithoutNoiseGivesEqualPriorities) {
  AgentConfig cfg;
  cfg.exploration_noise_std = 0.0;
  RetecsAgent agent(cfg, NeuralModel::zeros(2 + cfg.history_length, {8}));
  auto c = make_cycle(3, {{"a", 1, true}, {"b", 5, false}, {"c", 2, true}});
  const auto p = agent.prioritize(c, HistoryLog{});
  EXPECT_EQ(p.per_test, (std::vector<double>{0, 0, 0}));
}

TEST(RetecsAgent, NoiselessPrioritiesArePureFunctionOfModelAndHistory) {
  AgentConfig cfg;
  cfg.exploration_noise_std = 0.0;
  RetecsAgent a(cfg), b(cfg);
  HistoryLog h;
  h.append(make_cycle(0, {{"a", 1, true}, {"b", 2, false}}));
  auto c = make_cycle(1, {{"a", 1, true}, {"b", 2, false}});
  EXPECT_EQ(a.prioritize(c, h).per_test, b.prioritize(c, h).per_test);
  EXPECT_EQ(a.prioritize(c, h).per_test, a.prioritize(c, h).per_test);
}

TEST(RetecsAgent, NoiseDecaysOncePerCycle) {
  AgentConfig cfg;
  RetecsAgent a(cfg);
  auto c = make_cycle(0, {{"a", 1, true}});
  a.prioritize(c, HistoryLog{});
  a.prioritize(c, HistoryLog{});
  EXPECT_NEAR(a.current_noise_std(), 0.3 * 0.995 * 0.995, 1e-15);
}

TEST(RetecsAgent, BufferGrowsByScheduleAndEvictsAtCapacity) {
  AgentConfig cfg;
  cfg.replay_capacity = 5;
  RetecsAgent agent(cfg);
  auto c = make_cycle(0, {{"a", 1, true}, {"b", 1, false}, {"c", 1, true}, {"d", 1, false}});
  HistoryLog h;
  const auto p = agent.prioritize(c, h);
  const auto s = build_schedule(p, c, 0.5);
  ASSERT_EQ(s.size(), 2u);
  agent.observe_and_learn(c, s, compute_reward(RewardKind::kTestCaseFailure, c, s), h);
  EXPECT_EQ(agent.buffer().size(), 2u);
  for (int i = 0; i < 3; ++i) {
    agent.prioritize(c, h);
    agent.observe_and_learn(c, s, compute_reward(RewardKind::kTestCaseFailure, c, s), h);
  }
  EXPECT_EQ(agent.buffer().size(), 5u);
}

TEST(RetecsAgent, TreeScoresFailingHistoryAboveCleanHistory) {
  AgentConfig cfg;
  cfg.approximator = AgentKind::kTree;
  cfg.exploration_noise_std = 0.0;
  RetecsAgent agent(cfg);
  std::vector<Experience> batch;
  for (int i = 0; i < 20; ++i) {
    Experience e;
    e.state.normalized_duration = 0.5;
    e.state.recency = 0.5;
    const bool f = i % 2 == 0;
    e.state.failure_history.assign(cfg.history_length, f ? 1.0 : 0.0);
    e.reward = f ? 1.0 : 0.0;
    batch.push_back(e);
  }
  agent.fit(batch);
  EXPECT_GT(agent.value(batch[0].state), agent.value(batch[1].state));
}

TEST(RetecsAgent, LearnsToRankAlwaysFailingTestsHigh) {
  for (auto kind : {AgentKind::kNetwork, AgentKind::kTree}) {
    const auto ds = small_synth(1);
    AgentConfig cfg;
    cfg.seed = 3;
    auto agent = make_prioritizer(kind, cfg);
    replay(*agent, ds, 50);
    // Priorities of cycle 50 without touching its feedback.
    HistoryLog h;
    for (std::size_t i = 0; i < 50; ++i) h.append(ds.cycles[i]);
    const auto& c = ds.cycles[50];
    const auto p = agent->prioritize(c, h);
    auto sorted = p.per_test;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c.records()[i].status == Status::kFailed) {
        EXPECT_GT(p.per_test[i], median) << agent_name(kind) << " " << c.records()[i].test.str();
      }
    }
  }
}

TEST(RetecsAgent, ReplayIsDeterministicAndFinite) {
  const auto ds = small_synth(2);
  for (auto kind : {AgentKind::kNetwork, AgentKind::kTree}) {
    AgentConfig cfg;
    cfg.seed = 11;
    auto a = make_prioritizer(kind, cfg);
    auto b = make_prioritizer(kind, cfg);
    const auto pa = replay(*a, ds, 40, RewardKind::kTimeRanked);
    const auto pb = replay(*b, ds, 40, RewardKind::kTimeRanked);
    EXPECT_EQ(pa.per_test, pb.per_test);
    for (double v : pa.per_test) EXPECT_TRUE(std::isfinite(v));
  }
}

TEST(RandomBaseline, SeededUniformUnitInterval) {
  std::vector<tcprio::testing::Row> spec;
  for (int i = 0; i < 12; ++i) spec.push_back({"t" + std::to_string(i), 1, false});
  const auto c = make_cycle(0, spec);
  const auto a = baseline_random(c, 5);
  EXPECT_EQ(a.per_test, baseline_random(c, 5).per_test);
  EXPECT_NE(a.per_test, baseline_random(c, 6).per_test);
  for (double v : a.per_test) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(SortingBaseline, MostRecentVerdictDrivesPriority) {
  HistoryLog h;
  h.append(make_cycle(0, {{"a", 1, false}, {"b", 1, true}}));
  h.append(make_cycle(1, {{"a", 1, true}, {"b", 1, false}}));
  const auto c = make_cycle(2, {{"a", 1, false}, {"b", 1, false}, {"new", 1, false}});
  EXPECT_EQ(baseline_sorting(c, h).per_test, (std::vector<double>{1, 0, 1}));
}

TEST(SortingBaseline, AllPassedFallsBackToTieBreak) {
  HistoryLog h;
  h.append(make_cycle(0, {{"b", 1, false}, {"a", 1, false}}));
  const auto c = make_cycle(1, {{"b", 1, false}, {"a", 1, false}});
  const auto p = baseline_sorting(c, h);
  EXPECT_EQ(p.per_test, (std::vector<double>{0, 0}));
  const auto s = build_schedule(p, c, 1.0);
  EXPECT_EQ(s.ordered_tests().front(), TestId("a"));
}

TEST(WeightingBaseline, EqualWeightMean) {
  HistoryLog h;
  h.append(TestId("a"), Execution{4, Status::kFailed});
  const auto c = make_cycle(4, {{"a", 1, true}, {"b", 2, false}});
  const auto p = baseline_weighting(c, h, 4);
  EXPECT_NEAR(p.per_test[0], (1.0 + 1.0 + 0.5) / 3.0, 1e-15);
  // Never run at cycle 4: recency 1/5, no failures, full duration.
  EXPECT_NEAR(p.per_test[1], (0.0 + 0.2 + 1.0) / 3.0, 1e-15);
}

TEST(WeightingBaseline, NeverRunZeroDuration) {
  const auto c = make_cycle(3, {{"a", 0, false}});
  EXPECT_NEAR(baseline_weighting(c, HistoryLog{}, 4).per_test[0], 0.25 / 3.0, 1e-15);
}

TEST(WeightingBaseline, IdenticalFeaturesIdenticalPriorities) {
  HistoryLog h;
  h.append(make_cycle(0, {{"a", 1, true}, {"b", 1, true}}));
  const auto c = make_cycle(1, {{"a", 1, false}, {"b", 1, false}});
  const auto p = baseline_weighting(c, h, 4);
  EXPECT_EQ(p.per_test[0], p.per_test[1]);
}
