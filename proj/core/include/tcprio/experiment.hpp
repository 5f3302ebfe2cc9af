#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tcprio/agents.hpp"
#include "tcprio/dataset.hpp"
#include "tcprio/evaluation.hpp"

namespace tcprio {

struct ExperimentConfig {
  std::filesystem::path dataset_path;
  LogFormat format = LogFormat::kCanonical;
  ParseOptions parse{};

  AgentKind agent = AgentKind::kNetwork;
  AgentConfig agent_config{};  // reward, H, noise, seed, approximator settings

  double budget_ratio = 0.5;
  std::size_t iterations = 30;
  /// Threads used for iterations; 0 picks the hardware concurrency.
  std::size_t workers = 1;
  std::filesystem::path output_dir;

  void validate() const;
  /// Seed of iteration k: agent_config.seed + k.
  std::uint64_t iteration_seed(std::size_t k) const { return agent_config.seed + k; }
};

struct IterationResult {
  std::size_t iteration = 0;
  std::uint64_t seed = 0;
  std::vector<CycleOutcome> cycles;

  NapfdSeries series() const;
};

struct ExperimentResult {
  std::string agent;
  std::string reward;
  std::vector<IterationResult> iterations;  // ordered by iteration index
  NapfdSeries mean;                         // per-cycle mean over iterations
  TrendLine trend;
};

/// Replays the dataset once: prioritize, schedule, evaluate, reward and
/// (for learning agents) learn, cycle by cycle.
IterationResult run_iteration(const Dataset& dataset, AgentKind agent, const AgentConfig& config,
                              double budget_ratio, std::size_t iteration = 0);

/// Runs every iteration (possibly on parallel workers) and reduces them in
/// iteration order, so the result does not depend on scheduling.
ExperimentResult run_experiment(const Dataset& dataset, const ExperimentConfig& config);

/// Loads config.dataset_path first. Names are validated before any work.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Mean per-cycle series of several iterations.
NapfdSeries mean_series(const std::vector<IterationResult>& iterations);

struct BaselineComparison {
  std::string label;  // agent name of the baseline
  ExperimentResult result;
  std::vector<GroupDifference> groups;
};

struct ComparisonResult {
  ExperimentResult retecs;
  std::vector<BaselineComparison> baselines;
};

/// Runs `primary` and each baseline on one dataset and groups the NAPFD
/// differences (baseline - primary). Throws ConfigError when the configs
/// disagree on dataset or budget.
ComparisonResult compare(const Dataset& dataset, const ExperimentConfig& primary,
                         const std::vector<ExperimentConfig>& baselines,
                         std::size_t group_size = 30);
ComparisonResult compare(const ExperimentConfig& primary,
                         const std::vector<ExperimentConfig>& baselines,
                         std::size_t group_size = 30);

}  // namespace tcprio
