#include "tcprio/agents.hpp"

#include <algorithm>
#include <cmath>

#include "tcprio/errors.hpp"

namespace tcprio {
namespace {

std::mt19937_64 derived_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream};
  return std::mt19937_64(seq);
}

double cycle_max_duration(const CiCycle& cycle) {
  return cycle.max_duration() > 0.0 ? cycle.max_duration() : 1.0;
}

}  // namespace

AgentKind parse_agent_kind(std::string_view name) {
  if (name == "network") return AgentKind::kNetwork;
  if (name == "tree") return AgentKind::kTree;
  if (name == "random") return AgentKind::kRandom;
  if (name == "sorting") return AgentKind::kSorting;
  if (name == "weighting") return AgentKind::kWeighting;
  throw ConfigError("unknown agent '" + std::string(name) +
                    "' (expected network, tree, random, sorting or weighting)");
}

std::string agent_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::kNetwork: return "network";
    case AgentKind::kTree: return "tree";
    case AgentKind::kRandom: return "random";
    case AgentKind::kSorting: return "sorting";
    case AgentKind::kWeighting: return "weighting";
  }
  return "unknown";
}

bool is_learning(AgentKind kind) {
  return kind == AgentKind::kNetwork || kind == AgentKind::kTree;
}

void AgentConfig::validate() const {
  if (history_length == 0) throw ConfigError("history length must be >= 1");
  if (!(exploration_noise_std >= 0.0) || !std::isfinite(exploration_noise_std)) {
    throw ConfigError("exploration noise std must be non-negative");
  }
  if (!(exploration_decay > 0.0 && exploration_decay <= 1.0)) {
    throw ConfigError("exploration decay must be in (0, 1]");
  }
  if (replay_capacity == 0) throw ConfigError("replay capacity must be positive");
  if (train_batch_size == 0) throw ConfigError("training batch size must be positive");
  if (!(training.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (tree.min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
  if (tree.max_depth && *tree.max_depth == 0) throw ConfigError("max_depth must be >= 1");
  for (auto w : hidden_layers) {
    if (w == 0) throw ConfigError("hidden layer width must be positive");
  }
}

RetecsAgent::RetecsAgent(AgentConfig config)
    : config_(std::move(config)),
      buffer_(std::max<std::size_t>(1, config_.replay_capacity)),
      noise_std_(config_.exploration_noise_std),
      noise_rng_(derived_rng(config_.seed, 1)),
      sample_rng_(derived_rng(config_.seed, 2)) {
  config_.validate();
  const std::size_t dim = 2 + config_.history_length;
  if (config_.approximator == AgentKind::kNetwork) {
    network_.emplace(dim, config_.hidden_layers, config_.seed);
  } else if (config_.approximator == AgentKind::kTree) {
    tree_ = TreeModel::constant(dim, 0.0, config_.tree);
  } else {
    throw ConfigError("approximator must be network or tree");
  }
}

RetecsAgent::RetecsAgent(AgentConfig config, NeuralModel initial)
    : config_(std::move(config)),
      buffer_(std::max<std::size_t>(1, config_.replay_capacity)),
      noise_std_(config_.exploration_noise_std),
      noise_rng_(derived_rng(config_.seed, 1)),
      sample_rng_(derived_rng(config_.seed, 2)) {
  config_.validate();
  config_.approximator = AgentKind::kNetwork;
  if (initial.input_dimension() != 2 + config_.history_length) {
    throw ConfigError("initial network does not match the state dimension");
  }
  network_.emplace(std::move(initial));
}

std::vector<FeatureVector> RetecsAgent::states_for(const CiCycle& cycle,
                                                   const HistoryLog& history) {
  if (cached_cycle_ && *cached_cycle_ == cycle.index() &&
      cached_states_.size() == cycle.size()) {
    return cached_states_;
  }
  std::vector<FeatureVector> states;
  states.reserve(cycle.size());
  const double max_duration = cycle_max_duration(cycle);
  for (const auto& r : cycle.records()) {
    states.push_back(state_vector(r.duration, cycle.index(), history.executions(r.test),
                                  config_.history_length, max_duration));
  }
  return states;
}

double RetecsAgent::value(const FeatureVector& state) const {
  return network_ ? network_->predict(state) : tree_->predict(state);
}

PriorityAssignment RetecsAgent::prioritize(const CiCycle& cycle, const HistoryLog& history) {
  cached_cycle_.reset();
  cached_states_ = states_for(cycle, history);
  cached_cycle_ = cycle.index();

  PriorityAssignment out;
  out.per_test.reserve(cycle.size());
  std::normal_distribution<double> noise(0.0, noise_std_ > 0.0 ? noise_std_ : 1.0);
  for (const auto& s : cached_states_) {
    double p = value(s);
    if (noise_std_ > 0.0) p += noise(noise_rng_);
    out.per_test.push_back(p);
  }
  noise_std_ *= config_.exploration_decay;
  return out;
}

void RetecsAgent::observe_and_learn(const CiCycle& cycle, const Schedule& schedule,
                                    const RewardAssignment& rewards, const HistoryLog& history) {
  if (rewards.per_test.size() != cycle.size()) {
    throw InvalidArgument("rewards do not cover the cycle pool");
  }
  const auto states = states_for(cycle, history);
  // Unscheduled tests produce no experience: their zero reward is not an
  // observation.
  for (const auto& id : schedule.ordered_tests()) {
    const auto pos = cycle.find(id);
    if (!pos) throw IntegrityError("scheduled test " + id.str() + " not in cycle");
    buffer_.push(Experience{states[*pos], rewards.per_test[*pos]});
  }
  if (buffer_.empty()) return;
  const auto batch = buffer_.sample(config_.train_batch_size, sample_rng_);
  fit(batch);
}

void RetecsAgent::fit(std::span<const Experience> batch) {
  if (batch.empty()) return;
  if (network_) {
    fit_neural(*network_, batch, config_.training);
  } else {
    tree_ = fit_tree(batch, config_.tree);
  }
}

PriorityAssignment baseline_random(const CiCycle& cycle, std::uint64_t seed) {
  RandomBaseline b(seed);
  return b.prioritize(cycle, HistoryLog{});
}

PriorityAssignment RandomBaseline::prioritize(const CiCycle& cycle, const HistoryLog&) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  PriorityAssignment out;
  out.per_test.reserve(cycle.size());
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    double v = dist(rng_);
    // Some standard libraries can return the upper bound through rounding.
    if (v >= 1.0) v = std::nextafter(1.0, 0.0);
    out.per_test.push_back(v);
  }
  return out;
}

PriorityAssignment baseline_sorting(const CiCycle& cycle, const HistoryLog& history) {
  PriorityAssignment out;
  out.per_test.reserve(cycle.size());
  for (const auto& r : cycle.records()) {
    const auto past = history.executions(r.test);
    out.per_test.push_back(past.empty() ? 1.0 : failure_indicator(past.back().status));
  }
  return out;
}

PriorityAssignment baseline_weighting(const CiCycle& cycle, const HistoryLog& history,
                                      std::size_t history_length) {
  if (history_length == 0) throw InvalidArgument("history length must be >= 1");
  PriorityAssignment out;
  out.per_test.reserve(cycle.size());
  const double max_duration = cycle_max_duration(cycle);
  for (const auto& r : cycle.records()) {
    const auto past = history.executions(r.test);
    const auto fv = state_vector(r.duration, cycle.index(), past, history_length, max_duration);
    const std::size_t window = std::min(history_length, past.size());
    double fail_rate = 0.0;
    if (window > 0) {
      double failures = 0.0;
      for (std::size_t k = 0; k < window; ++k) failures += fv.failure_history[k];
      fail_rate = failures / static_cast<double>(window);
    }
    out.per_test.push_back((fail_rate + fv.recency + fv.normalized_duration) / 3.0);
  }
  return out;
}

std::unique_ptr<Prioritizer> make_prioritizer(AgentKind kind, AgentConfig config) {
  switch (kind) {
    case AgentKind::kNetwork:
    case AgentKind::kTree:
      config.approximator = kind;
      return std::make_unique<RetecsAgent>(std::move(config));
    case AgentKind::kRandom:
      return std::make_unique<RandomBaseline>(config.seed);
    case AgentKind::kSorting:
      return std::make_unique<SortingBaseline>();
    case AgentKind::kWeighting:
      config.validate();
      return std::make_unique<WeightingBaseline>(config.history_length);
  }
  throw ConfigError("unhandled agent kind");
}

}  // namespace tcprio
