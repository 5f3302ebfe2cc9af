#include "tcprio/replay_buffer.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "tcprio/errors.hpp"

namespace tcprio {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw InvalidArgument("replay buffer capacity must be positive");
}

void ReplayBuffer::push(Experience e) {
  if (!std::isfinite(e.reward)) throw InvalidArgument("experience reward must be finite");
  if (entries_.size() == capacity_) entries_.pop_front();
  entries_.push_back(std::move(e));
}

std::vector<Experience> ReplayBuffer::sample(std::size_t count, std::mt19937_64& rng) const {
  std::vector<Experience> out;
  out.reserve(std::min(count, entries_.size()));
  std::sample(entries_.begin(), entries_.end(), std::back_inserter(out), count, rng);
  return out;
}

}  // namespace tcprio
