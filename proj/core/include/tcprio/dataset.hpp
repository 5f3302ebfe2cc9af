#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tcprio/domain.hpp"

namespace tcprio {

/// Replayable CI history. Cycle indices run 0..n-1; test_pool is the sorted
/// set of every id that appears in any cycle.
struct Dataset {
  std::string name;
  std::vector<CiCycle> cycles;
  std::vector<TestId> test_pool;
};

/// Validates contiguous indices and derives the test pool.
Dataset make_dataset(std::string name, std::vector<CiCycle> cycles);

enum class LogFormat { kCanonical, kAbb };

/// Accepts `canonical` and `abb`.
LogFormat parse_log_format(std::string_view name);
std::string log_format_name(LogFormat f);

struct ParseOptions {
  /// Column holding the test identity in ABB-style logs.
  std::string abb_id_column = "Id";
};

/// Reads a CI log.
///
/// canonical: comma-separated, header `cycle,test_id,duration,verdict`.
/// abb: semicolon-separated with named columns; the id column, `Duration`,
///      `Verdict` and `Cycle` are required, everything else (LastRun, ...) is
///      ignored.
///
/// In both formats verdict 1 means failed and 0 means passed. Cycle numbers
/// are re-indexed to contiguous 0-based order. Throws ParseError for
/// malformed rows and IntegrityError for duplicate (cycle, test) pairs or
/// negative durations.
Dataset parse_ci_log(std::istream& in, LogFormat format, std::string name = {},
                     const ParseOptions& options = {});

/// Opens and parses `path`; the dataset is named after the file stem.
Dataset load_dataset(const std::filesystem::path& path, LogFormat format,
                     const ParseOptions& options = {});

/// Writes the canonical format. Parsing the output yields an equal dataset.
void write_canonical(std::ostream& out, const Dataset& dataset);

struct DatasetStats {
  std::size_t distinct_tests = 0;
  std::size_t commit_count = 0;
  std::size_t execution_count = 0;
  double failed_fraction = 0.0;  // failed records / executions; 0 when empty
};

DatasetStats dataset_stats(const Dataset& dataset);

/// Header plus one comma-separated row:
/// name,tests,commits,executions,failed_fraction,failed_percent
void write_stats_report(std::ostream& out, const std::string& name, const DatasetStats& stats);

/// Generator settings for the synthetic stand-in dataset.
struct SynthConfig {
  std::size_t test_count = 100;
  std::size_t cycle_count = 300;
  double always_fail_fraction = 0.2;
  double noise_flip_probability = 0.02;
  double min_duration = 1.0;
  double max_duration = 10.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Every test runs in every cycle with a fixed duration drawn uniformly from
/// [min_duration, max_duration]. A seeded subset of
/// ceil(always_fail_fraction * test_count) tests fails; all other tests
/// pass; then each verdict flips independently with noise_flip_probability.
Dataset synth_generate(const SynthConfig& config);

}  // namespace tcprio
