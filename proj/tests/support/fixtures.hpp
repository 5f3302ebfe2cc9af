#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "tcprio/domain.hpp"

namespace tcprio::testing {

struct Row {
  std::string id;
  double duration;
  bool failed;
};

inline CiCycle make_cycle(std::size_t index, const std::vector<Row>& rows) {
  std::vector<TestCaseRecord> recs;
  for (const auto& r : rows) {
    recs.push_back(
        TestCaseRecord{TestId(r.id), r.duration, r.failed ? Status::kFailed : Status::kPassed, index});
  }
  return CiCycle(index, std::move(recs));
}

inline Schedule make_schedule(const std::vector<std::string>& ids, std::size_t pool) {
  std::vector<TestId> t;
  for (const auto& id : ids) t.emplace_back(id);
  return Schedule(std::move(t), pool);
}

/// Random pool of `n` tests named t0..t{n-1} with random verdicts and
/// durations in [0, 10).
inline CiCycle random_cycle(std::mt19937_64& rng, std::size_t n, std::size_t index = 0) {
  std::uniform_real_distribution<double> dur(0.0, 10.0);
  std::bernoulli_distribution fail(0.35);
  std::vector<Row> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back({"t" + std::to_string(i), dur(rng), fail(rng)});
  return make_cycle(index, rows);
}

/// Random ordered subset of the pool.
inline Schedule random_schedule(std::mt19937_64& rng, const CiCycle& cycle) {
  std::vector<TestId> ids;
  for (const auto& r : cycle.records()) ids.push_back(r.test);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::uniform_int_distribution<std::size_t> len(0, ids.size());
  ids.erase(ids.begin() + static_cast<long>(len(rng)), ids.end());
  return Schedule(std::move(ids), cycle.size());
}

}  // namespace tcprio::testing
