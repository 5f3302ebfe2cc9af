#include "tcprio/experiment.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "tcprio/errors.hpp"
#include "tcprio/rewards.hpp"

namespace tcprio {

void ExperimentConfig::validate() const {
  if (iterations == 0) throw ConfigError("iterations must be >= 1");
  if (!(budget_ratio > 0.0 && budget_ratio <= 1.0)) {
    throw ConfigError("budget ratio must be in (0, 1]");
  }
  agent_config.validate();
}

NapfdSeries IterationResult::series() const {
  NapfdSeries s;
  s.per_cycle.reserve(cycles.size());
  for (const auto& c : cycles) s.per_cycle.push_back({c.cycle_index, c.napfd});
  return s;
}

IterationResult run_iteration(const Dataset& dataset, AgentKind agent, const AgentConfig& config,
                              double budget_ratio, std::size_t iteration) {
  IterationResult out;
  out.iteration = iteration;
  out.seed = config.seed;
  auto prioritizer = make_prioritizer(agent, config);
  HistoryLog history;
  out.cycles.reserve(dataset.cycles.size());
  for (const auto& cycle : dataset.cycles) {
    if (cycle.empty()) {
      out.cycles.push_back(CycleOutcome{cycle.index(), 1.0, 0, 0, 0});
      continue;
    }
    const auto priorities = prioritizer->prioritize(cycle, history);
    const auto schedule = build_schedule(priorities, cycle, budget_ratio);
    out.cycles.push_back(evaluate_cycle(schedule, cycle));
    if (prioritizer->learns()) {
      const auto rewards = compute_reward(config.reward, cycle, schedule);
      prioritizer->observe_and_learn(cycle, schedule, rewards, history);
    }
    history.append(cycle);
  }
  return out;
}

NapfdSeries mean_series(const std::vector<IterationResult>& iterations) {
  NapfdSeries mean;
  if (iterations.empty()) return mean;
  const auto& first = iterations.front().cycles;
  mean.per_cycle.resize(first.size());
  for (std::size_t c = 0; c < first.size(); ++c) mean.per_cycle[c].cycle_index = first[c].cycle_index;
  for (const auto& it : iterations) {
    if (it.cycles.size() != first.size()) throw InvalidArgument("iterations differ in length");
    for (std::size_t c = 0; c < first.size(); ++c) mean.per_cycle[c].value += it.cycles[c].napfd;
  }
  for (auto& p : mean.per_cycle) p.value /= static_cast<double>(iterations.size());
  return mean;
}

ExperimentResult run_experiment(const Dataset& dataset, const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.agent = agent_name(config.agent);
  result.reward = reward_name(config.agent_config.reward);
  result.iterations.resize(config.iterations);

  std::size_t workers = config.workers == 0 ? std::thread::hardware_concurrency() : config.workers;
  workers = std::max<std::size_t>(1, std::min(workers, config.iterations));

  auto run_one = [&](std::size_t k) {
    AgentConfig ac = config.agent_config;
    ac.seed = config.iteration_seed(k);
    result.iterations[k] = run_iteration(dataset, config.agent, ac, config.budget_ratio, k);
  };

  if (workers == 1) {
    for (std::size_t k = 0; k < config.iterations; ++k) run_one(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < config.iterations; k = next++) {
          try {
            run_one(k);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  result.mean = mean_series(result.iterations);
  if (result.mean.size() >= 2) result.trend = trend_fit(result.mean);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto dataset = load_dataset(config.dataset_path, config.format, config.parse);
  return run_experiment(dataset, config);
}

ComparisonResult compare(const Dataset& dataset, const ExperimentConfig& primary,
                         const std::vector<ExperimentConfig>& baselines, std::size_t group_size) {
  primary.validate();
  for (const auto& b : baselines) {
    b.validate();
    if (b.dataset_path != primary.dataset_path || b.format != primary.format) {
      throw ConfigError("compared experiments must use the same dataset");
    }
    if (b.budget_ratio != primary.budget_ratio) {
      throw ConfigError("compared experiments must use the same budget ratio");
    }
  }
  ComparisonResult out;
  out.retecs = run_experiment(dataset, primary);
  for (const auto& b : baselines) {
    BaselineComparison bc;
    bc.label = agent_name(b.agent);
    bc.result = run_experiment(dataset, b);
    bc.groups = grouped_difference(bc.result.mean, out.retecs.mean, group_size);
    out.baselines.push_back(std::move(bc));
  }
  return out;
}

ComparisonResult compare(const ExperimentConfig& primary,
                         const std::vector<ExperimentConfig>& baselines, std::size_t group_size) {
  primary.validate();
  for (const auto& b : baselines) {
    if (b.dataset_path != primary.dataset_path || b.format != primary.format) {
      throw ConfigError("compared experiments must use the same dataset");
    }
  }
  const auto dataset = load_dataset(primary.dataset_path, primary.format, primary.parse);
  return compare(dataset, primary, baselines, group_size);
}

}  // namespace tcprio
