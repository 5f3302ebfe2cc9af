#pragma once

#include <cstddef>
#include <deque>
#include <random>
#include <vector>

#include "tcprio/domain.hpp"

namespace tcprio {

struct Experience {
  FeatureVector state;
  double reward = 0.0;
};

/// Bounded FIFO of experiences; the oldest entry is evicted first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Experience e);

  /// Up to `count` distinct entries, drawn without replacement, in buffer
  /// order.
  std::vector<Experience> sample(std::size_t count, std::mt19937_64& rng) const;

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return entries_.empty(); }
  const std::deque<Experience>& entries() const noexcept { return entries_; }

 private:
  std::size_t capacity_;
  std::deque<Experience> entries_;
};

}  // namespace tcprio
