#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "tcprio/errors.hpp"
#include "tcprio/evaluation.hpp"

using namespace tcprio;
using tcprio::testing::make_cycle;
using tcprio::testing::make_schedule;

namespace {

std::vector<std::string> ids_of(const Schedule& s) {
  std::vector<std::string> out;
  for (const auto& t : s.ordered_tests()) out.push_back(t.str());
  return out;
}

NapfdSeries series(const std::vector<double>& ys) {
  NapfdSeries s;
  for (std::size_t i = 0; i < ys.size(); ++i) s.per_cycle.push_back({i, ys[i]});
  return s;
}

}  // namespace

TEST(BuildSchedule, GreedyPrefixStopsAtFirstOverflow) {
  auto c = make_cycle(0, {{"A", 4, false}, {"B", 3, false}, {"C", 2, false}, {"D", 1, false}});
  auto s = build_schedule(PriorityAssignment{{4, 3, 2, 1}}, c, 0.5);
  EXPECT_EQ(ids_of(s), (std::vector<std::string>{"A"}));
  EXPECT_EQ(s.total_pool_size(), 4u);
}

TEST(BuildSchedule, FullRatioKeepsEverythingInPriorityOrder) {
  auto c = make_cycle(0, {{"A", 4, false}, {"B", 3, false}, {"C", 2, false}});
  auto s = build_schedule(PriorityAssignment{{0.1, 0.9, 0.5}}, c, 1.0);
  EXPECT_EQ(ids_of(s), (std::vector<std::string>{"B", "C", "A"}));
}

TEST(BuildSchedule, TiesFallBackToTestId) {
  auto c = make_cycle(0, {{"c", 1, false}, {"a", 1, false}, {"b", 1, false}});
  auto s = build_schedule(PriorityAssignment{{0.5, 0.5, 0.5}}, c, 1.0);
  EXPECT_EQ(ids_of(s), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(BuildSchedule, ZeroDurationTestsFit) {
  auto c = make_cycle(0, {{"a", 0, false}, {"b", 0, false}});
  EXPECT_EQ(build_schedule(PriorityAssignment{{1, 2}}, c, 0.5).size(), 2u);
}

TEST(BuildSchedule, RejectsBadRatioAndPriorities) {
  auto c = make_cycle(0, {{"a", 1, false}});
  EXPECT_THROW(build_schedule(PriorityAssignment{{1}}, c, 0.0), ConfigError);
  EXPECT_THROW(build_schedule(PriorityAssignment{{1}}, c, 1.5), ConfigError);
  EXPECT_THROW(build_schedule(PriorityAssignment{{NAN}}, c, 1.0), std::exception);
}

TEST(BuildSchedule, PrefixIsMaximalAndWithinBudget) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> prio(0, 1), ratio(0.05, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = tcprio::testing::random_cycle(rng, 1 + trial % 20);
    PriorityAssignment p;
    for (std::size_t i = 0; i < c.size(); ++i) p.per_test.push_back(prio(rng));
    const double r = ratio(rng);
    const auto s = build_schedule(p, c, r);
    const double budget = r * c.total_duration();
    double used = 0;
    for (const auto& t : s.ordered_tests()) used += c.record(t).duration;
    ASSERT_LE(used, budget * (1 + 1e-9));

    std::vector<std::size_t> order(c.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (p.per_test[a] != p.per_test[b]) return p.per_test[a] > p.per_test[b];
      return c.records()[a].test < c.records()[b].test;
    });
    for (std::size_t k = 0; k < s.size(); ++k) ASSERT_EQ(s.ordered_tests()[k], c.records()[order[k]].test);
    if (s.size() < c.size()) {
      ASSERT_GT(used + c.records()[order[s.size()]].duration, budget);
    }
  }
}

TEST(Napfd, WorkedExamples) {
  auto c = make_cycle(0, {{"a", 1, true}, {"b", 1, true}, {"c", 1, false}, {"d", 1, false}});
  EXPECT_NEAR(napfd(make_schedule({"a", "b", "c", "d"}, 4), c, 2), 0.75, 1e-12);
  EXPECT_NEAR(napfd(make_schedule({"c", "d", "a", "b"}, 4), c, 2), 0.25, 1e-12);

  auto three = make_cycle(0, {{"a", 1, true}, {"b", 1, true}, {"c", 1, false}, {"d", 1, false},
                              {"e", 1, true}});
  EXPECT_NEAR(napfd(make_schedule({"a", "b", "c", "d"}, 5), three, 3), 0.375, 1e-12);
  EXPECT_EQ(napfd(make_schedule({"c", "d"}, 5), three, 3), 0.0);
}

TEST(Napfd, NoFailuresIsOne) {
  auto c = make_cycle(0, {{"a", 1, false}});
  EXPECT_EQ(napfd(make_schedule({"a"}, 1), c, 0), 1.0);
  EXPECT_EQ(napfd(make_schedule({}, 1), c, 0), 1.0);
}

TEST(Napfd, DetectedAboveTotalIsRejected) {
  auto c = make_cycle(0, {{"a", 1, true}, {"b", 1, true}});
  EXPECT_THROW(napfd(make_schedule({"a", "b"}, 2), c, 1), std::exception);
}

TEST(Napfd, MatchesOracleOnRandomSchedules) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto c = tcprio::testing::random_cycle(rng, 1 + trial % 12);
    const auto s = tcprio::testing::random_schedule(rng, c);
    std::vector<bool> flags;
    for (const auto& t : s.ordered_tests()) flags.push_back(c.record(t).status == Status::kFailed);
    ASSERT_NEAR(napfd(s, c, c.failure_count()), oracle::napfd(flags, c.failure_count()), 1e-12);
  }
}

TEST(Napfd, MovingAFailureLaterNeverHelps) {
  // Full schedule of 6 with one failure: value strictly decreases with rank.
  auto c = make_cycle(0, {{"a", 1, false}, {"b", 1, false}, {"c", 1, false}, {"d", 1, false},
                          {"e", 1, false}, {"f", 1, true}});
  std::vector<std::string> order{"f", "a", "b", "c", "d", "e"};
  double prev = 2.0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const double v = napfd(make_schedule(order, 6), c, 1);
    EXPECT_LT(v, prev);
    prev = v;
    std::swap(order[k], order[k + 1]);
  }
}

TEST(EvaluateCycle, ReportsCounts) {
  auto c = make_cycle(7, {{"a", 1, true}, {"b", 1, false}, {"c", 1, true}});
  const auto o = evaluate_cycle(make_schedule({"a", "b"}, 3), c);
  EXPECT_EQ(o.cycle_index, 7u);
  EXPECT_EQ(o.scheduled_count, 2u);
  EXPECT_EQ(o.detected, 1u);
  EXPECT_EQ(o.total_failures, 2u);
  EXPECT_NEAR(o.napfd, oracle::napfd({true, false}, 2), 1e-15);
}

TEST(Series, MeansAndValidation) {
  auto s = series({0.2, 0.4, 0.6, 0.8});
  EXPECT_NEAR(s.mean(), 0.5, 1e-15);
  EXPECT_NEAR(s.mean_between(1, 3), 0.5, 1e-15);
  EXPECT_NO_THROW(validate_series(s));
  EXPECT_THROW(validate_series(series({0.2, 1.5})), InvalidArgument);
  NapfdSeries unordered;
  unordered.per_cycle = {{1, 0.1}, {1, 0.2}};
  EXPECT_THROW(validate_series(unordered), InvalidArgument);
}

TEST(TrendFit, ClosedFormExamples) {
  auto flat = trend_fit(series({0.4, 0.4, 0.4}));
  EXPECT_NEAR(flat.slope, 0.0, 1e-15);

  auto line = trend_fit(series({0, 2, 4, 6, 8}));
  EXPECT_NEAR(line.slope, 2.0, 1e-12);
  EXPECT_NEAR(line.intercept, 0.0, 1e-12);

  auto tent = trend_fit(series({0, 1, 0}));
  EXPECT_NEAR(tent.slope, 0.0, 1e-12);
  EXPECT_NEAR(tent.intercept, 1.0 / 3.0, 1e-12);

  EXPECT_THROW(trend_fit(series({0.5})), InvalidArgument);
}

TEST(TrendFit, MinimisesSquaredResiduals) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> ys(40);
  for (auto& y : ys) y = u(rng);
  const auto s = series(ys);
  const auto fit = trend_fit(s);
  auto sse = [&](double a, double b) {
    double acc = 0;
    for (const auto& p : s.per_cycle) acc += std::pow(p.value - (a + b * p.cycle_index), 2);
    return acc;
  };
  const double best = sse(fit.intercept, fit.slope);
  for (double da : {-1e-3, 1e-3}) EXPECT_LT(best, sse(fit.intercept + da, fit.slope));
  for (double db : {-1e-4, 1e-4}) EXPECT_LT(best, sse(fit.intercept, fit.slope + db));
}

TEST(GroupedDifference, PartitionsAndSigns) {
  auto groups = grouped_difference(series(std::vector<double>(65, 0.8)),
                                   series(std::vector<double>(65, 0.6)), 30);
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[0].size, 30u);
  EXPECT_EQ(groups[1].size, 30u);
  EXPECT_EQ(groups[2].size, 5u);
  for (const auto& g : groups) EXPECT_NEAR(g.difference, 0.2, 1e-12);
}

TEST(GroupedDifference, SelfComparisonIsZero) {
  auto s = series({0.1, 0.5, 0.9, 0.3});
  for (const auto& g : grouped_difference(s, s, 3)) EXPECT_EQ(g.difference, 0.0);
}

TEST(GroupedDifference, RejectsMisalignedSeries) {
  EXPECT_THROW(grouped_difference(series({0.1, 0.2}), series({0.1}), 30), InvalidArgument);
}
