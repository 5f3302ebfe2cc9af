#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tcprio {

/// Opaque, non-empty test identifier. Ordering is lexicographic and is the
/// tie-break order used by the scheduler.
class TestId {
 public:
  explicit TestId(std::string token);

  const std::string& str() const noexcept { return token_; }

  friend bool operator==(const TestId&, const TestId&) = default;
  friend auto operator<=>(const TestId&, const TestId&) = default;

 private:
  std::string token_;
};

/// Execution outcome. The numeric values follow the status convention
/// (1 = passed, 0 = failed); agents consume the complement.
enum class Status : std::uint8_t { kFailed = 0, kPassed = 1 };

inline int status_value(Status s) { return static_cast<int>(s); }
inline double failure_indicator(Status s) { return s == Status::kFailed ? 1.0 : 0.0; }

struct TestCaseRecord {
  TestId test;
  double duration = 0.0;  // seconds, known before execution
  Status status = Status::kPassed;
  std::size_t cycle_index = 0;
};

/// All records of one commit. Construction validates that ids are unique,
/// every record carries this cycle's index and durations are non-negative.
class CiCycle {
 public:
  CiCycle(std::size_t index, std::vector<TestCaseRecord> records);

  std::size_t index() const noexcept { return index_; }
  const std::vector<TestCaseRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  /// Position of `test` in records(), if present.
  std::optional<std::size_t> find(const TestId& test) const;
  const TestCaseRecord& record(const TestId& test) const;

  double total_duration() const noexcept { return total_duration_; }
  double max_duration() const noexcept { return max_duration_; }
  std::size_t failure_count() const noexcept { return failure_count_; }

 private:
  std::size_t index_;
  std::vector<TestCaseRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
  double total_duration_ = 0.0;
  double max_duration_ = 0.0;
  std::size_t failure_count_ = 0;
};

/// Ordered, possibly truncated test suite for one cycle. Rank of position
/// k (0-based storage) is k + 1.
class Schedule {
 public:
  Schedule(std::vector<TestId> ordered_tests, std::size_t total_pool_size);

  const std::vector<TestId>& ordered_tests() const noexcept { return ordered_; }
  std::size_t size() const noexcept { return ordered_.size(); }
  std::size_t total_pool_size() const noexcept { return pool_size_; }

 private:
  std::vector<TestId> ordered_;
  std::size_t pool_size_;
};

/// One priority per pool test, indexed like `cycle.records()`.
struct PriorityAssignment {
  std::vector<double> per_test;

  double at(const CiCycle& cycle, const TestId& test) const {
    return per_test.at(cycle.find(test).value());
  }
};

/// 1-based rank of `test` in `schedule`, or nullopt when it was not selected.
std::optional<std::size_t> rank_of(const Schedule& schedule, const TestId& test);

/// Scheduled tests whose status is failed. Throws IntegrityError when a
/// scheduled test has no record in the cycle.
std::vector<TestId> failed_subset(const CiCycle& cycle, const Schedule& schedule);

/// Agent state for one test. failure_history holds 1 - status, newest first,
/// zero-padded at the tail.
struct FeatureVector {
  double normalized_duration = 0.0;
  double recency = 0.0;
  std::vector<double> failure_history;

  /// [normalized_duration, recency, failure_history...]
  std::vector<double> flatten() const;
  std::size_t dimension() const noexcept { return 2 + failure_history.size(); }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct Execution {
  std::size_t cycle_index = 0;
  Status status = Status::kPassed;
};

/// Per-test execution log, in chronological order.
class HistoryLog {
 public:
  void append(const CiCycle& cycle);
  void append(const TestId& test, Execution execution);

  /// Chronological (oldest first); empty when the test never ran.
  std::span<const Execution> executions(const TestId& test) const;

  std::size_t test_count() const noexcept { return log_.size(); }

 private:
  std::unordered_map<std::string, std::vector<Execution>> log_;
};

/// Encodes one test's state.
///
/// `chronological` is the test's past executions, oldest first; the newest
/// entries end up at the head of failure_history. Recency is 1 / (1 + d)
/// where d is the number of cycles since the last execution, or the current
/// cycle index when the test never ran. Durations are divided by
/// `max_duration` and clamped to [0, 1].
FeatureVector state_vector(double duration, std::size_t current_cycle_index,
                           std::span<const Execution> chronological,
                           std::size_t history_length, double max_duration);

}  // namespace tcprio

template <>
struct std::hash<tcprio::TestId> {
  std::size_t operator()(const tcprio::TestId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
