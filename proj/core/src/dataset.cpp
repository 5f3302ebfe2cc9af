#include "tcprio/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "tcprio/errors.hpp"
#include "tcprio/text_format.hpp"

namespace tcprio {
namespace {

struct RawRow {
  long long cycle;
  std::string test;
  double duration;
  Status status;
  std::size_t line;
};

void strip_bom(std::string& line, std::size_t line_no) {
  if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
}

Status parse_verdict(std::string_view field, std::size_t line) {
  auto v = parse_integer(field);
  if (!v || (*v != 0 && *v != 1)) {
    throw ParseError(line, "verdict must be 0 (passed) or 1 (failed), got '" +
                               std::string(trim(field)) + "'");
  }
  return *v == 1 ? Status::kFailed : Status::kPassed;
}

RawRow parse_fields(std::string_view cycle, std::string_view test, std::string_view duration,
                    std::string_view verdict, std::size_t line) {
  RawRow r;
  r.line = line;
  auto c = parse_integer(cycle);
  if (!c || *c < 0) throw ParseError(line, "cycle must be a non-negative integer");
  r.cycle = *c;
  r.test = std::string(trim(test));
  if (r.test.empty()) throw ParseError(line, "empty test id");
  auto d = parse_double(duration);
  if (!d || !std::isfinite(*d)) throw ParseError(line, "duration is not a number");
  if (*d < 0.0) {
    throw IntegrityError("line " + std::to_string(line) + ": negative duration for test " +
                         r.test + " in cycle " + std::to_string(r.cycle));
  }
  r.duration = *d;
  r.status = parse_verdict(verdict, line);
  return r;
}

Dataset assemble(std::string name, const std::vector<RawRow>& rows) {
  std::map<long long, std::vector<const RawRow*>> by_cycle;
  for (const auto& r : rows) by_cycle[r.cycle].push_back(&r);

  std::vector<CiCycle> cycles;
  cycles.reserve(by_cycle.size());
  std::size_t index = 0;
  for (const auto& [raw_cycle, members] : by_cycle) {
    std::set<std::string_view> seen;
    std::vector<TestCaseRecord> records;
    records.reserve(members.size());
    for (const RawRow* r : members) {
      if (!seen.insert(r->test).second) {
        throw IntegrityError("line " + std::to_string(r->line) + ": duplicate test " + r->test +
                             " in cycle " + std::to_string(raw_cycle));
      }
      records.push_back(TestCaseRecord{TestId(r->test), r->duration, r->status, index});
    }
    cycles.emplace_back(index, std::move(records));
    ++index;
  }
  return make_dataset(std::move(name), std::move(cycles));
}

Dataset parse_canonical(std::istream& in, std::string name) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<RawRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    strip_bom(line, line_no);
    if (trim(line).empty()) continue;
    const auto f = split_fields(line, ',');
    if (!have_header) {
      if (f.size() != 4 || trim(f[0]) != "cycle" || trim(f[1]) != "test_id" ||
          trim(f[2]) != "duration" || trim(f[3]) != "verdict") {
        throw ParseError(line_no, "expected header 'cycle,test_id,duration,verdict'");
      }
      have_header = true;
      continue;
    }
    if (f.size() != 4) {
      throw ParseError(line_no, "expected 4 fields, found " + std::to_string(f.size()));
    }
    rows.push_back(parse_fields(f[0], f[1], f[2], f[3], line_no));
  }
  if (!have_header) throw ParseError(line_no, "missing header row");
  return assemble(std::move(name), rows);
}

Dataset parse_abb(std::istream& in, std::string name, const ParseOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t header_size = 0;
  std::size_t id_col = 0, dur_col = 0, verdict_col = 0, cycle_col = 0;
  bool have_header = false;
  std::vector<RawRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    strip_bom(line, line_no);
    if (trim(line).empty()) continue;
    const auto f = split_fields(line, ';');
    if (!have_header) {
      auto column = [&](std::string_view wanted) {
        for (std::size_t i = 0; i < f.size(); ++i) {
          if (trim(f[i]) == wanted) return i;
        }
        throw ParseError(line_no, "header lacks column '" + std::string(wanted) + "'");
      };
      id_col = column(options.abb_id_column);
      dur_col = column("Duration");
      verdict_col = column("Verdict");
      cycle_col = column("Cycle");
      header_size = f.size();
      have_header = true;
      continue;
    }
    if (f.size() != header_size) {
      throw ParseError(line_no, "expected " + std::to_string(header_size) + " fields, found " +
                                    std::to_string(f.size()));
    }
    rows.push_back(parse_fields(f[cycle_col], f[id_col], f[dur_col], f[verdict_col], line_no));
  }
  if (!have_header) throw ParseError(line_no, "missing header row");
  return assemble(std::move(name), rows);
}

}  // namespace

Dataset make_dataset(std::string name, std::vector<CiCycle> cycles) {
  std::set<TestId> pool;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    if (cycles[i].index() != i) {
      throw IntegrityError("cycle indices must be contiguous from 0; found " +
                           std::to_string(cycles[i].index()) + " at position " +
                           std::to_string(i));
    }
    for (const auto& r : cycles[i].records()) pool.insert(r.test);
  }
  return Dataset{std::move(name), std::move(cycles), {pool.begin(), pool.end()}};
}

LogFormat parse_log_format(std::string_view name) {
  if (name == "canonical") return LogFormat::kCanonical;
  if (name == "abb") return LogFormat::kAbb;
  throw ConfigError("unknown log format '" + std::string(name) + "' (expected canonical or abb)");
}

std::string log_format_name(LogFormat f) {
  return f == LogFormat::kCanonical ? "canonical" : "abb";
}

Dataset parse_ci_log(std::istream& in, LogFormat format, std::string name,
                     const ParseOptions& options) {
  return format == LogFormat::kCanonical ? parse_canonical(in, std::move(name))
                                         : parse_abb(in, std::move(name), options);
}

Dataset load_dataset(const std::filesystem::path& path, LogFormat format,
                     const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dataset '" + path.string() + "'");
  return parse_ci_log(in, format, path.stem().string(), options);
}

void write_canonical(std::ostream& out, const Dataset& dataset) {
  out << "cycle,test_id,duration,verdict\n";
  for (const auto& c : dataset.cycles) {
    for (const auto& r : c.records()) {
      out << c.index() << ',' << r.test.str() << ',' << format_double(r.duration) << ','
          << (r.status == Status::kFailed ? 1 : 0) << '\n';
    }
  }
}

DatasetStats dataset_stats(const Dataset& dataset) {
  DatasetStats s;
  s.distinct_tests = dataset.test_pool.size();
  s.commit_count = dataset.cycles.size();
  std::size_t failed = 0;
  for (const auto& c : dataset.cycles) {
    s.execution_count += c.size();
    failed += c.failure_count();
  }
  s.failed_fraction = s.execution_count == 0
                          ? 0.0
                          : static_cast<double>(failed) / static_cast<double>(s.execution_count);
  return s;
}

void write_stats_report(std::ostream& out, const std::string& name, const DatasetStats& stats) {
  std::ostringstream pct;
  pct << std::fixed << std::setprecision(2) << stats.failed_fraction * 100.0;
  out << "name,tests,commits,executions,failed_fraction,failed_percent\n"
      << name << ',' << stats.distinct_tests << ',' << stats.commit_count << ','
      << stats.execution_count << ',' << format_double(stats.failed_fraction) << ','
      << pct.str() << '\n';
}

void SynthConfig::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(always_fail_fraction)) throw ConfigError("always_fail_fraction must be in [0, 1]");
  if (!unit(noise_flip_probability)) {
    throw ConfigError("noise_flip_probability must be in [0, 1]");
  }
  if (!(min_duration >= 0.0) || !(max_duration >= min_duration) || !std::isfinite(max_duration)) {
    throw ConfigError("duration bounds must satisfy 0 <= min <= max");
  }
}

Dataset synth_generate(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);

  const std::size_t width = std::to_string(config.test_count > 0 ? config.test_count - 1 : 0).size();
  std::vector<TestId> ids;
  std::vector<double> durations;
  ids.reserve(config.test_count);
  std::uniform_real_distribution<double> duration_dist(config.min_duration, config.max_duration);
  for (std::size_t i = 0; i < config.test_count; ++i) {
    std::ostringstream name;
    name << 'T' << std::setw(static_cast<int>(width)) << std::setfill('0') << i;
    ids.emplace_back(name.str());
    durations.push_back(config.min_duration == config.max_duration ? config.min_duration
                                                                   : duration_dist(rng));
  }

  const auto failing_count = static_cast<std::size_t>(
      std::ceil(config.always_fail_fraction * static_cast<double>(config.test_count) - 1e-9));
  std::vector<std::size_t> all(config.test_count);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> failing;
  std::sample(all.begin(), all.end(), std::back_inserter(failing), failing_count, rng);
  std::vector<bool> always_fails(config.test_count, false);
  for (auto i : failing) always_fails[i] = true;

  std::bernoulli_distribution flip(config.noise_flip_probability);
  std::vector<CiCycle> cycles;
  cycles.reserve(config.cycle_count);
  for (std::size_t c = 0; c < config.cycle_count; ++c) {
    std::vector<TestCaseRecord> records;
    records.reserve(config.test_count);
    for (std::size_t i = 0; i < config.test_count; ++i) {
      bool failed = always_fails[i];
      if (flip(rng)) failed = !failed;
      records.push_back(
          TestCaseRecord{ids[i], durations[i], failed ? Status::kFailed : Status::kPassed, c});
    }
    cycles.emplace_back(c, std::move(records));
  }
  return make_dataset("synthetic", std::move(cycles));
}

}  // namespace tcprio
