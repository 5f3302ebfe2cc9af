#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tcprio/domain.hpp"

namespace tcprio {

/// One reward per pool test, indexed like `cycle.records()`.
struct RewardAssignment {
  std::vector<double> per_test;

  double at(const CiCycle& cycle, const TestId& test) const {
    return per_test.at(cycle.find(test).value());
  }
};

enum class RewardKind { kFailCount, kTestCaseFailure, kTimeRanked };

/// Accepts `failcount`, `tcfail` and `timerank`; throws ConfigError otherwise.
RewardKind parse_reward_kind(std::string_view name);
std::string reward_name(RewardKind kind);

/// Every scheduled test receives the number of scheduled failures.
RewardAssignment reward_failure_count(const CiCycle& cycle, const Schedule& schedule);

/// 1 for a scheduled failure, 0 for everything else.
RewardAssignment reward_test_case_failure(const CiCycle& cycle, const Schedule& schedule);

/// |fail| - status(t) * (scheduled failures ranked after t). A passed test is
/// penalised once per failure it delayed; failures get the full count.
RewardAssignment reward_time_ranked(const CiCycle& cycle, const Schedule& schedule);

RewardAssignment compute_reward(RewardKind kind, const CiCycle& cycle,
                                const Schedule& schedule);

}  // namespace tcprio
