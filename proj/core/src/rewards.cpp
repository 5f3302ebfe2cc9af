#include "tcprio/rewards.hpp"

#include "tcprio/errors.hpp"

namespace tcprio {
namespace {

// Record positions of the scheduled tests, in rank order.
std::vector<std::size_t> scheduled_positions(const CiCycle& cycle,
                                             const Schedule& schedule) {
  std::vector<std::size_t> pos;
  pos.reserve(schedule.size());
  for (const auto& id : schedule.ordered_tests()) {
    auto p = cycle.find(id);
    if (!p) {
      throw IntegrityError("scheduled test " + id.str() + " has no record in cycle " +
                           std::to_string(cycle.index()));
    }
    pos.push_back(*p);
  }
  return pos;
}

std::size_t count_failed(const CiCycle& cycle, const std::vector<std::size_t>& pos) {
  std::size_t n = 0;
  for (auto p : pos) {
    if (cycle.records()[p].status == Status::kFailed) ++n;
  }
  return n;
}

}  // namespace

RewardKind parse_reward_kind(std::string_view name) {
  if (name == "failcount") return RewardKind::kFailCount;
  if (name == "tcfail") return RewardKind::kTestCaseFailure;
  if (name == "timerank") return RewardKind::kTimeRanked;
  throw ConfigError("unknown reward '" + std::string(name) +
                    "' (expected failcount, tcfail or timerank)");
}

std::string reward_name(RewardKind kind) {
  switch (kind) {
    case RewardKind::kFailCount: return "failcount";
    case RewardKind::kTestCaseFailure: return "tcfail";
    case RewardKind::kTimeRanked: return "timerank";
  }
  return "unknown";
}

RewardAssignment reward_failure_count(const CiCycle& cycle, const Schedule& schedule) {
  const auto pos = scheduled_positions(cycle, schedule);
  const auto failed = static_cast<double>(count_failed(cycle, pos));
  RewardAssignment out{std::vector<double>(cycle.size(), 0.0)};
  for (auto p : pos) out.per_test[p] = failed;
  return out;
}

RewardAssignment reward_test_case_failure(const CiCycle& cycle, const Schedule& schedule) {
  const auto pos = scheduled_positions(cycle, schedule);
  RewardAssignment out{std::vector<double>(cycle.size(), 0.0)};
  for (auto p : pos) out.per_test[p] = failure_indicator(cycle.records()[p].status);
  return out;
}

RewardAssignment reward_time_ranked(const CiCycle& cycle, const Schedule& schedule) {
  const auto pos = scheduled_positions(cycle, schedule);
  const auto failed = static_cast<double>(count_failed(cycle, pos));
  RewardAssignment out{std::vector<double>(cycle.size(), 0.0)};
  double failures_after = 0.0;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    const Status s = cycle.records()[*it].status;
    out.per_test[*it] = failed - status_value(s) * failures_after;
    if (s == Status::kFailed) failures_after += 1.0;
  }
  return out;
}

RewardAssignment compute_reward(RewardKind kind, const CiCycle& cycle,
                                const Schedule& schedule) {
  switch (kind) {
    case RewardKind::kFailCount: return reward_failure_count(cycle, schedule);
    case RewardKind::kTestCaseFailure: return reward_test_case_failure(cycle, schedule);
    case RewardKind::kTimeRanked: return reward_time_ranked(cycle, schedule);
  }
  throw ConfigError("unhandled reward kind");
}

}  // namespace tcprio
