#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tcprio/domain.hpp"
#include "tcprio/neural_model.hpp"
#include "tcprio/replay_buffer.hpp"
#include "tcprio/rewards.hpp"
#include "tcprio/tree_model.hpp"

namespace tcprio {

enum class AgentKind { kNetwork, kTree, kRandom, kSorting, kWeighting };

/// Accepts `network`, `tree`, `random`, `sorting` and `weighting`.
AgentKind parse_agent_kind(std::string_view name);
std::string agent_name(AgentKind kind);
bool is_learning(AgentKind kind);

struct AgentConfig {
  std::size_t history_length = 4;
  RewardKind reward = RewardKind::kTestCaseFailure;
  AgentKind approximator = AgentKind::kNetwork;
  double exploration_noise_std = 0.3;
  double exploration_decay = 0.995;  // applied once per cycle
  std::uint64_t seed = 0;

  std::vector<std::size_t> hidden_layers{32};
  NeuralTrainOptions training{};
  std::size_t replay_capacity = 10000;
  std::size_t train_batch_size = 1000;
  TreeParams tree{};

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Common interface of the learning agent and the baselines. One instance
/// drives one replay; instances are not shared between runs.
class Prioritizer {
 public:
  virtual ~Prioritizer() = default;

  virtual std::string name() const = 0;
  virtual PriorityAssignment prioritize(const CiCycle& cycle, const HistoryLog& history) = 0;

  /// Feedback after the schedule ran. `history` must still be the log that
  /// was passed to prioritize() for this cycle.
  virtual void observe_and_learn(const CiCycle& /*cycle*/, const Schedule& /*schedule*/,
                                 const RewardAssignment& /*rewards*/,
                                 const HistoryLog& /*history*/) {}

  virtual bool learns() const { return false; }
};

/// Reinforcement-learning prioritizer. Each test is scored independently by
/// a value-function approximator over its state vector, plus zero-mean
/// Gaussian exploration noise whose deviation decays once per cycle.
/// After a cycle, (state, reward) pairs of the scheduled tests enter a replay
/// buffer and the approximator is refit on a sample of it.
class RetecsAgent final : public Prioritizer {
 public:
  explicit RetecsAgent(AgentConfig config);
  /// Starts from the given network instead of a seeded initialisation.
  RetecsAgent(AgentConfig config, NeuralModel initial);

  std::string name() const override { return agent_name(config_.approximator); }
  PriorityAssignment prioritize(const CiCycle& cycle, const HistoryLog& history) override;
  void observe_and_learn(const CiCycle& cycle, const Schedule& schedule,
                         const RewardAssignment& rewards, const HistoryLog& history) override;
  bool learns() const override { return true; }

  /// Refits the approximator on `batch`; a no-op when the batch is empty.
  void fit(std::span<const Experience> batch);
  double value(const FeatureVector& state) const;

  const AgentConfig& config() const noexcept { return config_; }
  const ReplayBuffer& buffer() const noexcept { return buffer_; }
  double current_noise_std() const noexcept { return noise_std_; }
  const NeuralModel* network() const noexcept { return network_ ? &*network_ : nullptr; }
  const TreeModel* tree() const noexcept { return tree_ ? &*tree_ : nullptr; }

 private:
  std::vector<FeatureVector> states_for(const CiCycle& cycle, const HistoryLog& history);

  AgentConfig config_;
  std::optional<NeuralModel> network_;
  std::optional<TreeModel> tree_;
  ReplayBuffer buffer_;
  double noise_std_;
  std::mt19937_64 noise_rng_;
  std::mt19937_64 sample_rng_;

  // States computed by the last prioritize() call, reused for its feedback.
  std::optional<std::size_t> cached_cycle_;
  std::vector<FeatureVector> cached_states_;
};

/// Uniform priorities in [0, 1) from a generator seeded with `seed`.
PriorityAssignment baseline_random(const CiCycle& cycle, std::uint64_t seed);

/// 1 when the most recent verdict is a failure or the test never ran, else 0.
PriorityAssignment baseline_sorting(const CiCycle& cycle, const HistoryLog& history);

/// Equal-weight mean of the failure rate over the last min(H, available)
/// verdicts, recency and normalised duration (the latter two encoded as in
/// state_vector).
PriorityAssignment baseline_weighting(const CiCycle& cycle, const HistoryLog& history,
                                      std::size_t history_length);

class RandomBaseline final : public Prioritizer {
 public:
  explicit RandomBaseline(std::uint64_t seed) : rng_(seed) {}
  std::string name() const override { return "random"; }
  PriorityAssignment prioritize(const CiCycle& cycle, const HistoryLog& history) override;

 private:
  std::mt19937_64 rng_;
};

class SortingBaseline final : public Prioritizer {
 public:
  std::string name() const override { return "sorting"; }
  PriorityAssignment prioritize(const CiCycle& cycle, const HistoryLog& history) override {
    return baseline_sorting(cycle, history);
  }
};

class WeightingBaseline final : public Prioritizer {
 public:
  explicit WeightingBaseline(std::size_t history_length) : history_length_(history_length) {}
  std::string name() const override { return "weighting"; }
  PriorityAssignment prioritize(const CiCycle& cycle, const HistoryLog& history) override {
    return baseline_weighting(cycle, history, history_length_);
  }

 private:
  std::size_t history_length_;
};

/// Builds the prioritizer named by `kind`. For learning kinds the
/// approximator comes from `kind`, overriding config.approximator.
std::unique_ptr<Prioritizer> make_prioritizer(AgentKind kind, AgentConfig config);

}  // namespace tcprio
