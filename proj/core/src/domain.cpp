#include "tcprio/domain.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "tcprio/errors.hpp"

namespace tcprio {

TestId::TestId(std::string token) : token_(std::move(token)) {
  if (token_.empty()) throw InvalidArgument("test id must be non-empty");
}

CiCycle::CiCycle(std::size_t index, std::vector<TestCaseRecord> records)
    : index_(index), records_(std::move(records)) {
  by_id_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.cycle_index != index_) {
      throw IntegrityError("record for test " + r.test.str() + " has cycle " +
                           std::to_string(r.cycle_index) + ", expected " +
                           std::to_string(index_));
    }
    if (!(r.duration >= 0.0) || !std::isfinite(r.duration)) {
      throw IntegrityError("negative or non-finite duration for test " +
                           r.test.str() + " in cycle " + std::to_string(index_));
    }
    if (!by_id_.emplace(r.test.str(), i).second) {
      throw IntegrityError("duplicate test " + r.test.str() + " in cycle " +
                           std::to_string(index_));
    }
    total_duration_ += r.duration;
    max_duration_ = std::max(max_duration_, r.duration);
    if (r.status == Status::kFailed) ++failure_count_;
  }
}

std::optional<std::size_t> CiCycle::find(const TestId& test) const {
  auto it = by_id_.find(test.str());
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

const TestCaseRecord& CiCycle::record(const TestId& test) const {
  auto pos = find(test);
  if (!pos) {
    throw IntegrityError("test " + test.str() + " has no record in cycle " +
                         std::to_string(index_));
  }
  return records_[*pos];
}

Schedule::Schedule(std::vector<TestId> ordered_tests, std::size_t total_pool_size)
    : ordered_(std::move(ordered_tests)), pool_size_(total_pool_size) {
  if (ordered_.size() > pool_size_) {
    throw InvalidArgument("schedule longer than its pool");
  }
  std::unordered_set<std::string> seen;
  seen.reserve(ordered_.size());
  for (const auto& id : ordered_) {
    if (!seen.insert(id.str()).second) {
      throw InvalidArgument("duplicate test " + id.str() + " in schedule");
    }
  }
}

std::optional<std::size_t> rank_of(const Schedule& schedule, const TestId& test) {
  const auto& tests = schedule.ordered_tests();
  auto it = std::find(tests.begin(), tests.end(), test);
  if (it == tests.end()) return std::nullopt;
  return static_cast<std::size_t>(it - tests.begin()) + 1;
}

std::vector<TestId> failed_subset(const CiCycle& cycle, const Schedule& schedule) {
  std::vector<TestId> failed;
  for (const auto& id : schedule.ordered_tests()) {
    if (cycle.record(id).status == Status::kFailed) failed.push_back(id);
  }
  return failed;
}

std::vector<double> FeatureVector::flatten() const {
  std::vector<double> out;
  out.reserve(dimension());
  out.push_back(normalized_duration);
  out.push_back(recency);
  out.insert(out.end(), failure_history.begin(), failure_history.end());
  return out;
}

void HistoryLog::append(const CiCycle& cycle) {
  for (const auto& r : cycle.records()) {
    append(r.test, Execution{r.cycle_index, r.status});
  }
}

void HistoryLog::append(const TestId& test, Execution execution) {
  log_[test.str()].push_back(execution);
}

std::span<const Execution> HistoryLog::executions(const TestId& test) const {
  auto it = log_.find(test.str());
  if (it == log_.end()) return {};
  return it->second;
}

FeatureVector state_vector(double duration, std::size_t current_cycle_index,
                           std::span<const Execution> chronological,
                           std::size_t history_length, double max_duration) {
  if (history_length == 0) throw InvalidArgument("history length must be >= 1");
  if (!(max_duration > 0.0)) throw InvalidArgument("max_duration must be > 0");

  FeatureVector fv;
  fv.normalized_duration = std::clamp(duration / max_duration, 0.0, 1.0);

  std::size_t delta = current_cycle_index;
  if (!chronological.empty()) {
    const std::size_t last = chronological.back().cycle_index;
    delta = current_cycle_index > last ? current_cycle_index - last : 0;
  }
  fv.recency = 1.0 / (1.0 + static_cast<double>(delta));

  fv.failure_history.assign(history_length, 0.0);
  const std::size_t n = std::min(history_length, chronological.size());
  for (std::size_t k = 0; k < n; ++k) {
    fv.failure_history[k] =
        failure_indicator(chronological[chronological.size() - 1 - k].status);
  }
  return fv;
}

}  // namespace tcprio
