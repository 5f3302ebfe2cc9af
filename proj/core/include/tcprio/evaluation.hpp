#pragma once

#include <cstddef>
#include <vector>

#include "tcprio/domain.hpp"

namespace tcprio {

/// Sorts the pool by priority (descending, ties by TestId ascending) and
/// keeps the longest prefix whose cumulative duration stays within
/// budget_ratio * total pool duration. Zero-duration tests always fit while
/// the prefix is still growing.
Schedule build_schedule(const PriorityAssignment& priorities, const CiCycle& cycle,
                        double budget_ratio);

/// Normalized average percentage of fault detection for one cycle.
///
///   p     = detected / total_failures_in_pool
///   NAPFD = p - sum(rank of detected failures) / (detected * |schedule|)
///             + p / (2 * |schedule|)
///
/// Returns 1 when the pool has no failures and 0 when failures exist but
/// none were scheduled. Values can drop below 0 when p < 1 and the detected
/// failures sit at the tail of the schedule.
double napfd(const Schedule& schedule, const CiCycle& cycle, std::size_t total_failures_in_pool);

struct CycleOutcome {
  std::size_t cycle_index = 0;
  double napfd = 0.0;
  std::size_t scheduled_count = 0;
  std::size_t detected = 0;
  std::size_t total_failures = 0;
};

CycleOutcome evaluate_cycle(const Schedule& schedule, const CiCycle& cycle);

struct NapfdPoint {
  std::size_t cycle_index = 0;
  double value = 0.0;
};

/// Per-cycle NAPFD values with strictly increasing cycle indices.
struct NapfdSeries {
  std::vector<NapfdPoint> per_cycle;

  std::size_t size() const noexcept { return per_cycle.size(); }
  /// Mean value over cycle indices in [first, last).
  double mean_between(std::size_t first, std::size_t last) const;
  double mean() const;
};

/// Throws InvalidArgument when indices are not strictly increasing or a
/// value is non-finite or above 1.
void validate_series(const NapfdSeries& series);

struct TrendLine {
  double slope = 0.0;
  double intercept = 0.0;

  double at(double x) const noexcept { return intercept + slope * x; }
};

/// Ordinary least squares over (cycle_index, value). Needs two or more points.
TrendLine trend_fit(const NapfdSeries& series);

struct GroupDifference {
  std::size_t group_index = 0;
  std::size_t size = 0;
  double baseline_mean = 0.0;
  double retecs_mean = 0.0;
  double difference = 0.0;  // baseline_mean - retecs_mean
};

/// Consecutive groups of `group_size` cycles; a trailing partial group keeps
/// its actual size. Positive differences favour the baseline. Throws
/// InvalidArgument on misaligned series.
std::vector<GroupDifference> grouped_difference(const NapfdSeries& baseline,
                                                const NapfdSeries& retecs,
                                                std::size_t group_size = 30);

}  // namespace tcprio
