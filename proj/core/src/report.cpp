#include "tcprio/report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "tcprio/errors.hpp"
#include "tcprio/text_format.hpp"

namespace tcprio {
namespace {

constexpr const char* kPalette[] = {"#c0392b", "#2471a3", "#229954", "#b7950b", "#7d3c98",
                                    "#ca6f1e"};

std::string color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  auto out = open_output(path);
  out << content;
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// Plot area in SVG pixel coordinates.
struct Frame {
  double width = 900, height = 420;
  double left = 60, right = 160, top = 30, bottom = 50;
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;

  double px(double x) const {
    const double span = x_max > x_min ? x_max - x_min : 1.0;
    return left + (x - x_min) / span * (width - left - right);
  }
  double py(double y) const {
    const double span = y_max > y_min ? y_max - y_min : 1.0;
    return top + (y_max - y) / span * (height - top - bottom);
  }
};

void axes(std::ostringstream& svg, const Frame& f, const std::string& x_label,
          const std::string& y_label) {
  svg << "<rect x=\"0\" y=\"0\" width=\"" << f.width << "\" height=\"" << f.height
      << "\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << f.left << "\" y1=\"" << f.py(f.y_min) << "\" x2=\""
      << f.width - f.right << "\" y2=\"" << f.py(f.y_min) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << f.left << "\" y1=\"" << f.top << "\" x2=\"" << f.left << "\" y2=\""
      << f.height - f.bottom << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double y = f.y_min + (f.y_max - f.y_min) * k / 4.0;
    svg << "<text x=\"" << f.left - 6 << "\" y=\"" << fixed(f.py(y) + 4, 1)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fixed(y) << "</text>\n";
  }
  for (int k = 0; k <= 5; ++k) {
    const double x = f.x_min + (f.x_max - f.x_min) * k / 5.0;
    svg << "<text x=\"" << fixed(f.px(x), 1) << "\" y=\"" << f.height - f.bottom + 16
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fixed(x, 0) << "</text>\n";
  }
  svg << "<text x=\"" << (f.left + f.width - f.right) / 2 << "\" y=\"" << f.height - 10
      << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  svg << "<text x=\"14\" y=\"" << (f.top + f.height - f.bottom) / 2
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << (f.top + f.height - f.bottom) / 2 << ")\">" << escape(y_label) << "</text>\n";
}

void legend(std::ostringstream& svg, const Frame& f, std::size_t i, const std::string& label) {
  const double y = f.top + 18.0 * static_cast<double>(i);
  const double x = f.width - f.right + 12;
  svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"12\" height=\"12\" fill=\""
      << color(i) << "\"/>\n";
  svg << "<text x=\"" << x + 18 << "\" y=\"" << y + 10 << "\" font-size=\"11\">"
      << escape(label) << "</text>\n";
}

}  // namespace

void write_results_rows(std::ostream& out, const ExperimentResult& result) {
  for (const auto& it : result.iterations) {
    for (const auto& c : it.cycles) {
      out << result.agent << ',' << result.reward << ',' << it.iteration << ',' << c.cycle_index
          << ',' << format_double(c.napfd) << ',' << c.scheduled_count << ',' << c.detected << ','
          << c.total_failures << '\n';
    }
  }
}

void write_results_csv(std::ostream& out, const ExperimentResult& result) {
  out << "agent,reward,iteration,cycle,napfd,scheduled_count,detected,total_failures\n";
  write_results_rows(out, result);
}

void write_trend_csv(std::ostream& out, const std::vector<const ExperimentResult*>& results) {
  out << "agent,reward,slope,intercept,cycles,mean_napfd\n";
  for (const auto* r : results) {
    out << r->agent << ',' << r->reward << ',' << format_double(r->trend.slope) << ','
        << format_double(r->trend.intercept) << ',' << r->mean.size() << ','
        << format_double(r->mean.size() ? r->mean.mean() : 0.0) << '\n';
  }
}

void write_diff_csv(std::ostream& out, const std::vector<GroupDifference>& groups) {
  out << "group_index,group_size,baseline_mean,retecs_mean,difference\n";
  for (const auto& g : groups) {
    out << g.group_index << ',' << g.size << ',' << format_double(g.baseline_mean) << ','
        << format_double(g.retecs_mean) << ',' << format_double(g.difference) << '\n';
  }
}

std::string render_napfd_svg(const std::vector<const ExperimentResult*>& results) {
  Frame f;
  double x_max = 1;
  double y_min = 0;
  for (const auto* r : results) {
    for (const auto& p : r->mean.per_cycle) {
      x_max = std::max(x_max, static_cast<double>(p.cycle_index));
      y_min = std::min(y_min, p.value);
    }
  }
  f.x_max = x_max;
  f.y_min = y_min;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\""
      << f.height << "\">\n";
  axes(svg, f, "CI cycle", "NAPFD");
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto* r = results[i];
    svg << "<polyline fill=\"none\" stroke=\"" << color(i) << "\" stroke-width=\"1\" points=\"";
    for (const auto& p : r->mean.per_cycle) {
      svg << fixed(f.px(static_cast<double>(p.cycle_index)), 2) << ','
          << fixed(f.py(p.value), 2) << ' ';
    }
    svg << "\"/>\n";
    if (r->mean.size() >= 2) {
      const double x0 = static_cast<double>(r->mean.per_cycle.front().cycle_index);
      const double x1 = static_cast<double>(r->mean.per_cycle.back().cycle_index);
      svg << "<line x1=\"" << fixed(f.px(x0)) << "\" y1=\"" << fixed(f.py(r->trend.at(x0)))
          << "\" x2=\"" << fixed(f.px(x1)) << "\" y2=\"" << fixed(f.py(r->trend.at(x1)))
          << "\" stroke=\"" << color(i) << "\" stroke-width=\"2.5\"/>\n";
    }
    legend(svg, f, i, r->agent + " / " + r->reward);
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_diff_svg(const std::vector<BaselineComparison>& baselines) {
  Frame f;
  std::size_t groups = 0;
  double lo = -0.1, hi = 0.1;
  for (const auto& b : baselines) {
    groups = std::max(groups, b.groups.size());
    for (const auto& g : b.groups) {
      lo = std::min(lo, g.difference);
      hi = std::max(hi, g.difference);
    }
  }
  f.x_min = 0;
  f.x_max = static_cast<double>(std::max<std::size_t>(groups, 1));
  f.y_min = lo * 1.1;
  f.y_max = hi * 1.1;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\""
      << f.height << "\">\n";
  axes(svg, f, "group of 30 cycles", "NAPFD difference (baseline - agent)");
  svg << "<line x1=\"" << f.left << "\" y1=\"" << fixed(f.py(0)) << "\" x2=\""
      << f.width - f.right << "\" y2=\"" << fixed(f.py(0)) << "\" stroke=\"gray\"/>\n";
  const double slot = (f.px(1) - f.px(0));
  const double bar = slot * 0.8 / static_cast<double>(std::max<std::size_t>(baselines.size(), 1));
  for (std::size_t i = 0; i < baselines.size(); ++i) {
    for (const auto& g : baselines[i].groups) {
      const double x = f.px(static_cast<double>(g.group_index)) + slot * 0.1 + bar * i;
      const double y0 = f.py(0.0);
      const double y1 = f.py(g.difference);
      svg << "<rect x=\"" << fixed(x) << "\" y=\"" << fixed(std::min(y0, y1)) << "\" width=\""
          << fixed(bar) << "\" height=\"" << fixed(std::abs(y1 - y0)) << "\" fill=\""
          << color(i) << "\"/>\n";
    }
    legend(svg, f, i, baselines[i].label);
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_meta(std::ostream& out, const ExperimentConfig& config, const std::string& command) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  const auto& ac = config.agent_config;
  out << "generated_at=" << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ") << '\n';
  out << "command=" << command << '\n';
  out << "dataset=" << config.dataset_path.string() << '\n';
  out << "format=" << log_format_name(config.format) << '\n';
  out << "agent=" << agent_name(config.agent) << '\n';
  out << "reward=" << reward_name(ac.reward) << '\n';
  out << "history_length=" << ac.history_length << '\n';
  out << "noise_std=" << format_double(ac.exploration_noise_std) << '\n';
  out << "noise_decay=" << format_double(ac.exploration_decay) << '\n';
  out << "budget_ratio=" << format_double(config.budget_ratio) << '\n';
  out << "iterations=" << config.iterations << '\n';
  out << "hidden_layers=";
  for (std::size_t i = 0; i < ac.hidden_layers.size(); ++i) {
    out << (i ? "," : "") << ac.hidden_layers[i];
  }
  out << '\n';
  out << "learning_rate=" << format_double(ac.training.learning_rate) << '\n';
  out << "minibatch_size=" << ac.training.minibatch_size << '\n';
  out << "train_batch_size=" << ac.train_batch_size << '\n';
  out << "replay_capacity=" << ac.replay_capacity << '\n';
  out << "tree_criterion=" << criterion_name(ac.tree.criterion) << '\n';
  out << "tree_max_depth=" << (ac.tree.max_depth ? std::to_string(*ac.tree.max_depth) : "none")
      << '\n';
  out << "tree_min_samples_split=" << ac.tree.min_samples_split << '\n';
  out << "seed=" << ac.seed << '\n';
  out << "iteration_seeds=";
  for (std::size_t k = 0; k < config.iterations; ++k) {
    out << (k ? "," : "") << config.iteration_seed(k);
  }
  out << '\n';
}

void write_run_outputs(const ExperimentConfig& config, const ExperimentResult& result) {
  const auto& dir = config.output_dir;
  std::filesystem::create_directories(dir);
  {
    auto out = open_output(dir / "results.csv");
    write_results_csv(out, result);
  }
  {
    auto out = open_output(dir / "trend.csv");
    write_trend_csv(out, {&result});
  }
  write_file(dir / "napfd.svg", render_napfd_svg({&result}));
  auto meta = open_output(dir / "meta.txt");
  write_meta(meta, config, "run");
}

void write_compare_outputs(const ExperimentConfig& primary, const ComparisonResult& comparison) {
  const auto& dir = primary.output_dir;
  std::filesystem::create_directories(dir);
  std::vector<const ExperimentResult*> all{&comparison.retecs};
  for (const auto& b : comparison.baselines) all.push_back(&b.result);
  {
    auto out = open_output(dir / "results.csv");
    out << "agent,reward,iteration,cycle,napfd,scheduled_count,detected,total_failures\n";
    for (const auto* r : all) write_results_rows(out, *r);
  }
  {
    auto out = open_output(dir / "trend.csv");
    write_trend_csv(out, all);
  }
  for (const auto& b : comparison.baselines) {
    auto out = open_output(dir / ("diff_" + b.label + ".csv"));
    write_diff_csv(out, b.groups);
  }
  write_file(dir / "napfd.svg", render_napfd_svg(all));
  write_file(dir / "diff.svg", render_diff_svg(comparison.baselines));
  auto meta = open_output(dir / "meta.txt");
  write_meta(meta, primary, "compare");
  meta << "baselines=";
  for (std::size_t i = 0; i < comparison.baselines.size(); ++i) {
    meta << (i ? "," : "") << comparison.baselines[i].label;
  }
  meta << '\n';
}

}  // namespace tcprio
