#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tcprio/experiment.hpp"

namespace tcprio {

/// agent,reward,iteration,cycle,napfd,scheduled_count,detected,total_failures
void write_results_csv(std::ostream& out, const ExperimentResult& result);
/// Appends rows without the header.
void write_results_rows(std::ostream& out, const ExperimentResult& result);

/// agent,reward,slope,intercept,cycles,mean_napfd
void write_trend_csv(std::ostream& out, const std::vector<const ExperimentResult*>& results);

/// group_index,group_size,baseline_mean,retecs_mean,difference
void write_diff_csv(std::ostream& out, const std::vector<GroupDifference>& groups);

/// NAPFD per cycle with the fitted trend line for each experiment.
std::string render_napfd_svg(const std::vector<const ExperimentResult*>& results);

/// Grouped difference bars, one colour per baseline.
std::string render_diff_svg(const std::vector<BaselineComparison>& baselines);

/// `generated_at` is the only non-deterministic line and comes first.
void write_meta(std::ostream& out, const ExperimentConfig& config, const std::string& command);

/// results.csv, trend.csv, napfd.svg and meta.txt under config.output_dir.
void write_run_outputs(const ExperimentConfig& config, const ExperimentResult& result);

/// The run outputs for every experiment plus diff_<baseline>.csv and diff.svg.
void write_compare_outputs(const ExperimentConfig& primary, const ComparisonResult& comparison);

}  // namespace tcprio
