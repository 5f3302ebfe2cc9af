#include "cli_commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "tcprio/dataset.hpp"
#include "tcprio/errors.hpp"
#include "tcprio/experiment.hpp"
#include "tcprio/report.hpp"
#include "tcprio/text_format.hpp"

namespace tcprio::cli {
namespace {

struct ExperimentFlags {
  std::string dataset;
  std::string format = "canonical";
  std::string id_column = "Id";
  std::string agent = "network";
  std::string reward = "tcfail";
  std::size_t history = 4;
  double noise = 0.3;
  double decay = 0.995;
  std::uint64_t seed = 0;
  double budget = 0.5;
  std::size_t iterations = 30;
  std::size_t workers = 1;
  std::string out = "results";
  std::vector<std::size_t> hidden{32};
  double learning_rate = 0.05;
  std::size_t minibatch = 32;
  std::size_t batch_size = 1000;
  std::size_t capacity = 10000;
  std::string criterion = "gini";
  std::string max_depth = "20";
  std::size_t min_samples_split = 3;
};

void add_experiment_options(CLI::App* cmd, ExperimentFlags& f) {
  cmd->set_config("--config", "", "key=value configuration file");
  cmd->add_option("--dataset", f.dataset, "CI log to replay")->required();
  cmd->add_option("--format", f.format, "canonical | abb")->capture_default_str();
  cmd->add_option("--id-column", f.id_column, "test id column of abb logs")->capture_default_str();
  cmd->add_option("--agent", f.agent, "network | tree | random | sorting | weighting")
      ->capture_default_str();
  cmd->add_option("--reward", f.reward, "failcount | tcfail | timerank")->capture_default_str();
  cmd->add_option("--history", f.history, "history length H")->capture_default_str();
  cmd->add_option("--noise", f.noise, "initial exploration noise std")->capture_default_str();
  cmd->add_option("--decay", f.decay, "per-cycle noise decay factor")->capture_default_str();
  cmd->add_option("--seed", f.seed, "base seed; iteration k uses seed + k")->capture_default_str();
  cmd->add_option("--budget", f.budget, "fraction of total duration per cycle")
      ->capture_default_str();
  cmd->add_option("--iterations", f.iterations, "independent replays")->capture_default_str();
  cmd->add_option("--workers", f.workers, "parallel iterations (0 = all cores)")
      ->capture_default_str();
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--hidden", f.hidden, "hidden layer widths")->capture_default_str();
  cmd->add_option("--learning-rate", f.learning_rate)->capture_default_str();
  cmd->add_option("--minibatch", f.minibatch, "SGD mini-batch size")->capture_default_str();
  cmd->add_option("--batch-size", f.batch_size, "replay sample per cycle")->capture_default_str();
  cmd->add_option("--capacity", f.capacity, "replay buffer capacity")->capture_default_str();
  cmd->add_option("--criterion", f.criterion, "gini | entropy")->capture_default_str();
  cmd->add_option("--max-depth", f.max_depth, "tree depth limit or 'none'")
      ->capture_default_str();
  cmd->add_option("--min-samples-split", f.min_samples_split)->capture_default_str();
}

ExperimentConfig to_config(const ExperimentFlags& f) {
  ExperimentConfig c;
  c.dataset_path = f.dataset;
  c.format = parse_log_format(f.format);
  c.parse.abb_id_column = f.id_column;
  c.agent = parse_agent_kind(f.agent);
  auto& a = c.agent_config;
  a.reward = parse_reward_kind(f.reward);
  a.approximator = is_learning(c.agent) ? c.agent : AgentKind::kNetwork;
  a.history_length = f.history;
  a.exploration_noise_std = f.noise;
  a.exploration_decay = f.decay;
  a.seed = f.seed;
  a.hidden_layers = f.hidden;
  a.training.learning_rate = f.learning_rate;
  a.training.minibatch_size = f.minibatch;
  a.train_batch_size = f.batch_size;
  a.replay_capacity = f.capacity;
  a.tree.criterion = parse_split_criterion(f.criterion);
  if (f.max_depth == "none") {
    a.tree.max_depth.reset();
  } else {
    auto v = parse_integer(f.max_depth);
    if (!v || *v < 1) throw ConfigError("--max-depth must be a positive integer or 'none'");
    a.tree.max_depth = static_cast<std::size_t>(*v);
  }
  a.tree.min_samples_split = f.min_samples_split;
  c.budget_ratio = f.budget;
  c.iterations = f.iterations;
  c.workers = f.workers;
  c.output_dir = f.out;
  c.validate();
  return c;
}

void print_error(const std::string& kind, const std::string& message) {
  std::string escaped;
  for (char ch : message) {
    if (ch == '"' || ch == '\\') escaped += '\\';
    escaped += ch == '\n' ? ' ' : ch;
  }
  std::cerr << "error kind=" << kind << " message=\"" << escaped << "\"\n";
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Reinforcement-learning test case prioritization over replayed CI logs"};
  app.require_subcommand(1);

  // stats
  auto* stats = app.add_subcommand("stats", "Dataset statistics as a one-row report");
  std::string stats_dataset, stats_format = "canonical", stats_id = "Id";
  stats->add_option("--dataset", stats_dataset)->required();
  stats->add_option("--format", stats_format, "canonical | abb")->capture_default_str();
  stats->add_option("--id-column", stats_id)->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic canonical CI log");
  SynthConfig sc;
  std::string synth_out;
  synth->set_config("--config", "", "key=value configuration file");
  synth->add_option("--tests", sc.test_count)->capture_default_str();
  synth->add_option("--cycles", sc.cycle_count)->capture_default_str();
  synth->add_option("--fail-fraction", sc.always_fail_fraction)->capture_default_str();
  synth->add_option("--flip", sc.noise_flip_probability)->capture_default_str();
  synth->add_option("--min-duration", sc.min_duration)->capture_default_str();
  synth->add_option("--max-duration", sc.max_duration)->capture_default_str();
  synth->add_option("--seed", sc.seed)->capture_default_str();
  synth->add_option("--out", synth_out, "output file (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "Replay a dataset with one agent");
  ExperimentFlags run_flags;
  add_experiment_options(run, run_flags);

  // compare
  auto* cmp = app.add_subcommand("compare", "Grouped NAPFD differences against baselines");
  ExperimentFlags cmp_flags;
  std::vector<std::string> baselines{"random", "sorting", "weighting"};
  std::size_t group_size = 30;
  add_experiment_options(cmp, cmp_flags);
  cmp->add_option("--baseline", baselines, "agents to compare against")->capture_default_str();
  cmp->add_option("--group-size", group_size, "cycles per bar")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (stats->parsed()) {
      ParseOptions po;
      po.abb_id_column = stats_id;
      const auto ds = load_dataset(stats_dataset, parse_log_format(stats_format), po);
      write_stats_report(std::cout, ds.name, dataset_stats(ds));
    } else if (synth->parsed()) {
      const auto ds = synth_generate(sc);
      if (synth_out.empty()) {
        write_canonical(std::cout, ds);
      } else {
        std::ofstream out(synth_out, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write '" + synth_out + "'");
        write_canonical(out, ds);
      }
    } else if (run->parsed()) {
      const auto config = to_config(run_flags);
      const auto result = run_experiment(config);
      write_run_outputs(config, result);
      std::cout << "agent=" << result.agent << " reward=" << result.reward
                << " cycles=" << result.mean.size()
                << " mean_napfd=" << format_double(result.mean.size() ? result.mean.mean() : 0.0)
                << " slope=" << format_double(result.trend.slope) << '\n';
    } else if (cmp->parsed()) {
      const auto primary = to_config(cmp_flags);
      std::vector<ExperimentConfig> others;
      for (const auto& name : baselines) {
        auto flags = cmp_flags;
        flags.agent = name;
        others.push_back(to_config(flags));
      }
      const auto comparison = compare(primary, others, group_size);
      write_compare_outputs(primary, comparison);
      for (const auto& b : comparison.baselines) {
        std::cout << "baseline=" << b.label << " groups=" << b.groups.size() << '\n';
      }
    }
  } catch (const Error& e) {
    print_error(e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace tcprio::cli
