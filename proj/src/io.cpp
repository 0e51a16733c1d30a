#include "tpagg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace tpagg {

namespace {

using ojson = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool skippable(std::string_view line) {
  auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void malformed(std::string_view file, std::size_t line,
                            const std::string& what) {
  throw Error(ErrorKind::MalformedFile,
              std::string(file) + ":" + std::to_string(line) + ": " + what);
}

BlockId parse_block(std::string_view tok, std::string_view file,
                    std::size_t line) {
  BlockId v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
    malformed(file, line, "bad block id '" + std::string(tok) + "'");
  }
  return v;
}

TestId resolve(const NameTable& names, std::string_view name,
               std::string_view file, std::size_t line) {
  if (auto id = names.find(name)) return *id;
  throw Error(ErrorKind::UnknownTest, std::string(file) + ":" +
                                          std::to_string(line) + ": test '" +
                                          std::string(name) + "' not in coverage");
}

void canonicalize(std::vector<BlockId>& blocks) {
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::MalformedFile, "cannot open " + path.string());
  }
  return in;
}

ojson groups_json(const std::vector<std::vector<TestId>>& groups) {
  ojson arr = ojson::array();
  for (const auto& g : groups) arr.push_back(g);
  return arr;
}

LabeledRanking ranking_from(const ojson& obj) {
  if (!obj.is_object() || !obj.contains("groups") ||
      !obj["groups"].is_array()) {
    throw Error(ErrorKind::MalformedFile, "ranking object needs a groups array");
  }
  std::string label = obj.value("strategy", std::string{});
  std::vector<std::vector<TestId>> groups;
  std::size_t n = 0;
  for (const auto& g : obj["groups"]) {
    if (!g.is_array()) throw Error(ErrorKind::MalformedFile, "group is not an array");
    std::vector<TestId> group;
    for (const auto& id : g) {
      if (!id.is_number_unsigned()) {
        throw Error(ErrorKind::MalformedFile, "test id must be a non-negative integer");
      }
      group.push_back(id.get<TestId>());
    }
    n += group.size();
    groups.push_back(std::move(group));
  }
  return {std::move(label), TiedRanking(std::move(groups), n)};
}

}  // namespace

ParsedCoverage parse_coverage(std::istream& in) {
  std::vector<std::string> names;
  std::vector<std::vector<BlockId>> coverage;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    auto fields = split(line, ',');
    if (fields[0].empty()) malformed("coverage", lineno, "missing test id");
    names.emplace_back(fields[0]);
    std::vector<BlockId> blocks;
    blocks.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      blocks.push_back(parse_block(fields[i], "coverage", lineno));
    }
    canonicalize(blocks);
    coverage.push_back(std::move(blocks));
  }
  return {NameTable(std::move(names)), std::move(coverage)};
}

std::vector<BlockId> parse_delta(std::istream& in) {
  std::vector<BlockId> delta;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    delta.push_back(parse_block(trim(line), "delta", lineno));
  }
  canonicalize(delta);
  return delta;
}

std::vector<double> parse_cost(std::istream& in, const NameTable& names) {
  std::vector<double> cost(names.size(), std::nan(""));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    auto fields = split(line, ',');
    if (fields.size() != 2) malformed("cost", lineno, "expected test_id,cost");
    TestId t = resolve(names, fields[0], "cost", lineno);
    double v = 0;
    auto tok = fields[1];
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() ||
        !std::isfinite(v)) {
      malformed("cost", lineno, "bad cost '" + std::string(tok) + "'");
    }
    if (!std::isnan(cost[t])) malformed("cost", lineno, "duplicate test");
    if (!(v > 0.0)) {
      throw Error(ErrorKind::NonPositiveCost, "cost:" + std::to_string(lineno), t);
    }
    cost[t] = v;
  }
  for (std::size_t t = 0; t < cost.size(); ++t) {
    if (std::isnan(cost[t])) {
      throw Error(ErrorKind::MissingTest, "no cost recorded",
                  static_cast<TestId>(t));
    }
  }
  return cost;
}

std::vector<Trace> parse_traces(std::istream& in, const NameTable& names) {
  std::vector<std::optional<Trace>> traces(names.size());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    ojson obj;
    try {
      obj = ojson::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      malformed("traces", lineno, e.what());
    }
    if (!obj.is_object() || !obj.contains("test") || !obj.contains("path") ||
        !obj["path"].is_array()) {
      malformed("traces", lineno, "expected {\"test\":..,\"path\":[..]}");
    }
    const auto& test = obj["test"];
    std::string name;
    if (test.is_number_unsigned()) {
      name = std::to_string(test.get<std::uint64_t>());
    } else if (test.is_string()) {
      name = test.get<std::string>();
    } else {
      malformed("traces", lineno, "test must be an id or name");
    }
    TestId t = resolve(names, name, "traces", lineno);
    if (traces[t]) malformed("traces", lineno, "duplicate test");
    Trace path;
    for (const auto& step : obj["path"]) {
      if (!step.is_array() || step.size() != 2 || !step[0].is_number_unsigned() ||
          !step[1].is_number_unsigned()) {
        malformed("traces", lineno, "path step must be [block, instr_count]");
      }
      auto instr = step[1].get<std::uint64_t>();
      if (instr == 0) malformed("traces", lineno, "instruction count must be positive");
      path.push_back({step[0].get<BlockId>(), instr});
    }
    if (path.empty()) throw Error(ErrorKind::EmptyTrace, "traces:" + std::to_string(lineno), t);
    traces[t] = std::move(path);
  }
  std::vector<Trace> out;
  out.reserve(traces.size());
  for (std::size_t t = 0; t < traces.size(); ++t) {
    if (!traces[t]) {
      throw Error(ErrorKind::MissingTraces, "no trace recorded",
                  static_cast<TestId>(t));
    }
    out.push_back(std::move(*traces[t]));
  }
  return out;
}

FailureRecord parse_failures(std::istream& in, const NameTable& names) {
  FailureRecord rec;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    rec.failed.push_back(resolve(names, trim(line), "failures", lineno));
  }
  std::sort(rec.failed.begin(), rec.failed.end());
  rec.failed.erase(std::unique(rec.failed.begin(), rec.failed.end()),
                   rec.failed.end());
  return rec;
}

SuiteSnapshot load_snapshot(const SnapshotPaths& paths) {
  SuiteSnapshot s;
  {
    auto in = open_in(paths.coverage);
    auto parsed = parse_coverage(in);
    s.names = std::move(parsed.names);
    s.coverage = std::move(parsed.coverage);
    s.n = s.coverage.size();
  }
  {
    auto in = open_in(paths.delta);
    s.delta = parse_delta(in);
  }
  {
    auto in = open_in(paths.cost);
    s.cost = parse_cost(in, s.names);
  }
  if (paths.traces) {
    auto in = open_in(*paths.traces);
    s.traces = parse_traces(in, s.names);
  }
  if (s.delta.empty()) {
    s.warnings.push_back(
        "EmptyDelta: no changed blocks; coverage heuristics are undefined");
  }
  s.validate();
  return s;
}

FailureRecord load_failures(const std::filesystem::path& path,
                            const NameTable& names) {
  auto in = open_in(path);
  return parse_failures(in, names);
}

void write_coverage(std::ostream& out, const SuiteSnapshot& s) {
  for (std::size_t t = 0; t < s.n; ++t) {
    out << s.names.name(static_cast<TestId>(t));
    for (BlockId b : s.coverage[t]) out << ',' << b;
    out << '\n';
  }
}

void write_delta(std::ostream& out, const SuiteSnapshot& s) {
  for (BlockId b : s.delta) out << b << '\n';
}

void write_cost(std::ostream& out, const SuiteSnapshot& s) {
  for (std::size_t t = 0; t < s.n; ++t) {
    out << s.names.name(static_cast<TestId>(t)) << ','
        << format_number(s.cost[t]) << '\n';
  }
}

void write_traces(std::ostream& out, const SuiteSnapshot& s) {
  if (!s.traces) return;
  for (std::size_t t = 0; t < s.n; ++t) {
    ojson obj;
    const auto& name = s.names.name(static_cast<TestId>(t));
    std::uint64_t numeric = 0;
    auto [ptr, ec] =
        std::from_chars(name.data(), name.data() + name.size(), numeric);
    if (ec == std::errc{} && ptr == name.data() + name.size() &&
        std::to_string(numeric) == name) {
      obj["test"] = numeric;
    } else {
      obj["test"] = name;
    }
    ojson path = ojson::array();
    for (const auto& step : (*s.traces)[t]) {
      path.push_back(ojson::array({step.block, step.instructions}));
    }
    obj["path"] = std::move(path);
    out << obj.dump() << '\n';
  }
}

void write_failures(std::ostream& out, const FailureRecord& f,
                    const NameTable& names) {
  for (TestId t : f.failed) out << names.name(t) << '\n';
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_fixed6(double value) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
  return std::string(buf, ptr);
}

std::string ranking_json(std::string_view strategy, const TiedRanking& r) {
  ojson obj;
  obj["strategy"] = std::string(strategy);
  obj["groups"] = groups_json(r.groups());
  return obj.dump();
}

std::string ranking_json(std::string_view strategy, const StrictRanking& r) {
  return ranking_json(strategy, TiedRanking::from_strict(r));
}

LabeledRanking parse_ranking_json(std::string_view text) {
  try {
    return ranking_from(ojson::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedFile, e.what());
  }
}

std::string ensemble_json(const Ensemble& e) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < e.size(); ++i) {
    out += ranking_json(e[i].label, e[i].ranking);
    out += i + 1 < e.size() ? ",\n" : "\n";
  }
  out += "]\n";
  return out;
}

Ensemble parse_ensemble_json(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedFile, e.what());
  }
  std::vector<EnsembleEntry> entries;
  auto add = [&](const ojson& obj) {
    auto lr = ranking_from(obj);
    if (!lr.ranking.is_strict()) {
      throw Error(ErrorKind::MalformedFile,
                  "ensemble entry '" + lr.strategy + "' contains ties");
    }
    entries.push_back({lr.strategy, flatten(lr.ranking)});
  };
  if (doc.is_array()) {
    for (const auto& obj : doc) add(obj);
  } else {
    add(doc);
  }
  return Ensemble(std::move(entries));
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::MalformedFile, "cannot write " + path.string());
  out << contents;
}

}  // namespace tpagg
