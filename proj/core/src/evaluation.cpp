#include "tcprio/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tcprio/errors.hpp"

namespace tcprio {

Schedule build_schedule(const PriorityAssignment& priorities, const CiCycle& cycle,
                        double budget_ratio) {
  if (!(budget_ratio > 0.0 && budget_ratio <= 1.0)) {
    throw ConfigError("budget ratio must be in (0, 1]");
  }
  if (priorities.per_test.size() != cycle.size()) {
    throw InvalidArgument("priorities do not cover the cycle pool");
  }
  const auto& recs = cycle.records();
  for (double p : priorities.per_test) {
    if (!std::isfinite(p)) throw InvalidArgument("non-finite priority");
  }

  std::vector<std::size_t> order(recs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double pa = priorities.per_test[a];
    const double pb = priorities.per_test[b];
    if (pa != pb) return pa > pb;
    return recs[a].test < recs[b].test;
  });

  const double budget = budget_ratio * cycle.total_duration();
  // Summation order differs from the pool total; absorb rounding so that a
  // ratio of 1 always admits the whole pool.
  const double limit = budget + 1e-9 * budget;
  std::vector<TestId> selected;
  double used = 0.0;
  for (auto i : order) {
    if (used + recs[i].duration > limit) break;
    used += recs[i].duration;
    selected.push_back(recs[i].test);
  }
  return Schedule(std::move(selected), recs.size());
}

double napfd(const Schedule& schedule, const CiCycle& cycle, std::size_t total_failures_in_pool) {
  std::size_t detected = 0;
  double rank_sum = 0.0;
  const auto& tests = schedule.ordered_tests();
  for (std::size_t k = 0; k < tests.size(); ++k) {
    if (cycle.record(tests[k]).status == Status::kFailed) {
      ++detected;
      rank_sum += static_cast<double>(k + 1);
    }
  }
  if (detected > total_failures_in_pool) {
    throw InvalidArgument("detected failures exceed the pool's failure count");
  }
  if (total_failures_in_pool == 0) return 1.0;
  if (detected == 0) return 0.0;

  const double n = static_cast<double>(tests.size());
  const double p = static_cast<double>(detected) / static_cast<double>(total_failures_in_pool);
  return p - rank_sum / (static_cast<double>(detected) * n) + p / (2.0 * n);
}

CycleOutcome evaluate_cycle(const Schedule& schedule, const CiCycle& cycle) {
  CycleOutcome out;
  out.cycle_index = cycle.index();
  out.scheduled_count = schedule.size();
  out.total_failures = cycle.failure_count();
  for (const auto& id : schedule.ordered_tests()) {
    if (cycle.record(id).status == Status::kFailed) ++out.detected;
  }
  out.napfd = napfd(schedule, cycle, out.total_failures);
  return out;
}

double NapfdSeries::mean_between(std::size_t first, std::size_t last) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& p : per_cycle) {
    if (p.cycle_index >= first && p.cycle_index < last) {
      sum += p.value;
      ++n;
    }
  }
  if (n == 0) throw InvalidArgument("no cycles in the requested range");
  return sum / static_cast<double>(n);
}

double NapfdSeries::mean() const {
  if (per_cycle.empty()) throw InvalidArgument("mean of an empty series");
  double sum = 0.0;
  for (const auto& p : per_cycle) sum += p.value;
  return sum / static_cast<double>(per_cycle.size());
}

void validate_series(const NapfdSeries& series) {
  for (std::size_t i = 0; i < series.per_cycle.size(); ++i) {
    const auto& p = series.per_cycle[i];
    if (!std::isfinite(p.value) || p.value > 1.0) {
      throw InvalidArgument("NAPFD value out of range at cycle " + std::to_string(p.cycle_index));
    }
    if (i > 0 && series.per_cycle[i - 1].cycle_index >= p.cycle_index) {
      throw InvalidArgument("cycle indices must be strictly increasing");
    }
  }
}

TrendLine trend_fit(const NapfdSeries& series) {
  const auto& pts = series.per_cycle;
  if (pts.size() < 2) throw InvalidArgument("trend fit needs at least two points");
  const double n = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) {
    mx += static_cast<double>(p.cycle_index);
    my += p.value;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : pts) {
    const double dx = static_cast<double>(p.cycle_index) - mx;
    sxx += dx * dx;
    sxy += dx * (p.value - my);
  }
  if (sxx == 0.0) throw InvalidArgument("trend fit needs distinct cycle indices");
  TrendLine t;
  t.slope = sxy / sxx;
  t.intercept = my - t.slope * mx;
  return t;
}

std::vector<GroupDifference> grouped_difference(const NapfdSeries& baseline,
                                                const NapfdSeries& retecs,
                                                std::size_t group_size) {
  if (group_size == 0) throw InvalidArgument("group size must be positive");
  if (baseline.size() != retecs.size()) {
    throw InvalidArgument("series have different lengths");
  }
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    if (baseline.per_cycle[i].cycle_index != retecs.per_cycle[i].cycle_index) {
      throw InvalidArgument("series are not aligned at position " + std::to_string(i));
    }
  }
  std::vector<GroupDifference> out;
  for (std::size_t start = 0, g = 0; start < baseline.size(); start += group_size, ++g) {
    const std::size_t end = std::min(baseline.size(), start + group_size);
    GroupDifference d;
    d.group_index = g;
    d.size = end - start;
    for (std::size_t i = start; i < end; ++i) {
      d.baseline_mean += baseline.per_cycle[i].value;
      d.retecs_mean += retecs.per_cycle[i].value;
    }
    d.baseline_mean /= static_cast<double>(d.size);
    d.retecs_mean /= static_cast<double>(d.size);
    d.difference = d.baseline_mean - d.retecs_mean;
    out.push_back(d);
  }
  return out;
}

}  // namespace tcprio
