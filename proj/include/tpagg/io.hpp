#pragma once

// Reading and writing of every on-disk artifact. Writers emit the canonical
// form, so write(read(x)) == x byte-for-byte whenever x is canonical.
//
//   coverage.csv   name,block,block,...        (one line per test)
//   delta.txt      block                        (one per line)
//   cost.csv       name,cost
//   traces.jsonl   {"test":<id>,"path":[[block,instructions],...]}
//   failures.txt   name                         (one per line)
//
// Test names are the first column of coverage.csv; dense ids follow line
// order there. Every other file refers to tests by name.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tpagg/model.hpp"

namespace tpagg {

struct SnapshotPaths {
  std::filesystem::path coverage;
  std::filesystem::path delta;
  std::filesystem::path cost;
  std::optional<std::filesystem::path> traces;
};

struct ParsedCoverage {
  NameTable names;
  std::vector<std::vector<BlockId>> coverage;
};

ParsedCoverage parse_coverage(std::istream& in);
std::vector<BlockId> parse_delta(std::istream& in);
std::vector<double> parse_cost(std::istream& in, const NameTable& names);
std::vector<Trace> parse_traces(std::istream& in, const NameTable& names);
FailureRecord parse_failures(std::istream& in, const NameTable& names);

SuiteSnapshot load_snapshot(const SnapshotPaths& paths);
FailureRecord load_failures(const std::filesystem::path& path,
                            const NameTable& names);

void write_coverage(std::ostream& out, const SuiteSnapshot& s);
void write_delta(std::ostream& out, const SuiteSnapshot& s);
void write_cost(std::ostream& out, const SuiteSnapshot& s);
void write_traces(std::ostream& out, const SuiteSnapshot& s);
void write_failures(std::ostream& out, const FailureRecord& f,
                    const NameTable& names);

/// Shortest decimal text that round-trips the value ("5", "0.25", ...).
std::string format_number(double value);
/// Fixed six-decimal rendering used by the metrics CSV.
std::string format_fixed6(double value);

struct LabeledRanking {
  std::string strategy;
  TiedRanking ranking;
};

std::string ranking_json(std::string_view strategy, const TiedRanking& r);
std::string ranking_json(std::string_view strategy, const StrictRanking& r);
/// Parses one ranking object; `n` is inferred from the groups.
LabeledRanking parse_ranking_json(std::string_view text);

/// A JSON array of ranking objects, one per line.
std::string ensemble_json(const Ensemble& e);
/// Accepts either an array of strict ranking objects or a single object.
Ensemble parse_ensemble_json(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace tpagg
