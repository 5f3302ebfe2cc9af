#include <gtest/gtest.h>

#include <random>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "tcprio/errors.hpp"
#include "tcprio/rewards.hpp"

using namespace tcprio;
using tcprio::testing::make_cycle;
using tcprio::testing::make_schedule;

namespace {

double at(const RewardAssignment& r, const CiCycle& c, const char* id) { return r.at(c, TestId(id)); }

oracle::Reward to_oracle(RewardKind k) {
  switch (k) {
    case RewardKind::kFailCount: return oracle::Reward::kFailCount;
    case RewardKind::kTestCaseFailure: return oracle::Reward::kTcFail;
    case RewardKind::kTimeRanked: break;
  }
  return oracle::Reward::kTimeRanked;
}

}  // namespace

TEST(RewardNames, RoundTrip) {
  for (auto k : {RewardKind::kFailCount, RewardKind::kTestCaseFailure, RewardKind::kTimeRanked}) {
    EXPECT_EQ(parse_reward_kind(reward_name(k)), k);
  }
  EXPECT_THROW(parse_reward_kind("bogus"), ConfigError);
}

TEST(FailureCountReward, ThreeFailuresAmongFiveScheduled) {
  auto c = make_cycle(0, {{"a", 1, true}, {"b", 1, false}, {"c", 1, true}, {"d", 1, true},
                          {"e", 1, false}, {"u", 1, true}});
  auto s = make_schedule({"a", "b", "c", "d", "e"}, 6);
  auto r = reward_failure_count(c, s);
  for (const char* id : {"a", "b", "c", "d", "e"}) EXPECT_EQ(at(r, c, id), 3.0);
  EXPECT_EQ(at(r, c, "u"), 0.0);
}

TEST(FailureCountReward, ZeroAndSingleFailure) {
  auto pass = make_cycle(0, {{"a", 1, false}, {"b", 1, false}});
  auto r = reward_failure_count(pass, make_schedule({"a", "b"}, 2));
  EXPECT_EQ(r.per_test, (std::vector<double>{0, 0}));

  auto one = make_cycle(0, {{"a", 1, true}});
  EXPECT_EQ(reward_failure_count(one, make_schedule({"a"}, 1)).per_test, (std::vector<double>{1}));
}

TEST(TestCaseFailureReward, WorkedExamples) {
  auto c = make_cycle(0, {{"f", 1, true}, {"p", 1, false}, {"u", 1, true}});
  auto r = reward_test_case_failure(c, make_schedule({"p", "f"}, 3));
  EXPECT_EQ(at(r, c, "f"), 1.0);
  EXPECT_EQ(at(r, c, "p"), 0.0);
  EXPECT_EQ(at(r, c, "u"), 0.0);
}

TEST(TimeRankedReward, WorkedExample) {
  auto c = make_cycle(0, {{"t1", 1, false}, {"t2", 1, true}, {"t3", 1, true}, {"t4", 1, false}});
  auto r = reward_time_ranked(c, make_schedule({"t1", "t2", "t3", "t4"}, 4));
  EXPECT_EQ(at(r, c, "t1"), 0.0);
  EXPECT_EQ(at(r, c, "t2"), 2.0);
  EXPECT_EQ(at(r, c, "t3"), 2.0);
  EXPECT_EQ(at(r, c, "t4"), 2.0);
}

TEST(TimeRankedReward, AllPassAndSingleFailure) {
  auto pass = make_cycle(0, {{"a", 1, false}, {"b", 1, false}});
  EXPECT_EQ(reward_time_ranked(pass, make_schedule({"b", "a"}, 2)).per_test,
            (std::vector<double>{0, 0}));
  auto one = make_cycle(0, {{"a", 1, true}});
  EXPECT_EQ(reward_time_ranked(one, make_schedule({"a"}, 1)).per_test, (std::vector<double>{1}));
}

TEST(TimeRankedReward, FailuresFirstLeavesPassesUnpenalised) {
  auto c = make_cycle(0, {{"a", 1, false}, {"b", 1, true}, {"c", 1, false}, {"d", 1, true}});
  auto r = reward_time_ranked(c, make_schedule({"b", "d", "a", "c"}, 4));
  for (double v : r.per_test) EXPECT_EQ(v, 2.0);
}

TEST(Rewards, FuzzInvariantsAndOracleAgreement) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(0, 15);
  for (int trial = 0; trial < 500; ++trial) {
    const auto c = tcprio::testing::random_cycle(rng, size(rng));
    const auto s = tcprio::testing::random_schedule(rng, c);
    std::vector<bool> failed;
    std::vector<std::size_t> rank;
    for (const auto& rec : c.records()) {
      failed.push_back(rec.status == Status::kFailed);
      rank.push_back(rank_of(s, rec.test).value_or(0));
    }
    const double detected = static_cast<double>(failed_subset(c, s).size());
    for (auto k : {RewardKind::kFailCount, RewardKind::kTestCaseFailure, RewardKind::kTimeRanked}) {
      const auto r = compute_reward(k, c, s);
      ASSERT_EQ(r.per_test, oracle::rewards(to_oracle(k), failed, rank));
      for (double v : r.per_test) ASSERT_GE(v, 0.0);
      if (k == RewardKind::kTimeRanked) {
        for (std::size_t i = 0; i < r.per_test.size(); ++i) {
          ASSERT_LE(r.per_test[i], detected);
          if (rank[i] != 0 && failed[i]) {
            ASSERT_EQ(r.per_test[i], detected);
          }
        }
      }
      if (k == RewardKind::kTestCaseFailure) {
        double sum = 0;
        for (double v : r.per_test) sum += v;
        ASSERT_EQ(sum, detected);
      }
    }
  }
}
