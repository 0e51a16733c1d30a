#include "tpagg/heuristics.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <istream>
#include <numeric>
#include <unordered_set>

#include "tpagg/parallel.hpp"

namespace tpagg {

namespace {

void require_delta(const SuiteSnapshot& s) {
  if (s.delta.empty()) throw Error(ErrorKind::EmptyDelta, "no changed blocks");
}

void require_costs(const SuiteSnapshot& s) {
  if (s.cost.size() != s.n) throw Error(ErrorKind::MissingCost, "cost vector size");
  for (std::size_t t = 0; t < s.n; ++t) {
    if (!(s.cost[t] > 0.0)) {
      throw Error(ErrorKind::NonPositiveCost, "", static_cast<TestId>(t));
    }
  }
}

StrictRanking order_by(const std::vector<double>& key, bool descending) {
  std::vector<TestId> order(key.size());
  std::iota(order.begin(), order.end(), TestId{0});
  std::stable_sort(order.begin(), order.end(), [&](TestId a, TestId b) {
    return descending ? key[a] > key[b] : key[a] < key[b];
  });
  return StrictRanking(std::move(order));
}

std::size_t intersection_size(std::span<const BlockId> a,
                              std::span<const BlockId> b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

// Indices into s.delta that each test covers.
std::vector<std::vector<std::size_t>> delta_coverage(const SuiteSnapshot& s) {
  std::vector<std::vector<std::size_t>> out(s.n);
  for (std::size_t t = 0; t < s.n; ++t) {
    for (BlockId b : s.coverage[t]) {
      auto it = std::lower_bound(s.delta.begin(), s.delta.end(), b);
      if (it != s.delta.end() && *it == b) {
        out[t].push_back(static_cast<std::size_t>(it - s.delta.begin()));
      }
    }
  }
  return out;
}

// Greedy additional selection. `gain_key` maps (test, new blocks) to the
// value being maximised.
template <typename Key>
StrictRanking greedy_additional(const SuiteSnapshot& s, Key gain_key) {
  auto dcov = delta_coverage(s);
  std::vector<char> covered(s.delta.size(), 0);
  std::vector<char> placed(s.n, 0);
  std::size_t covered_count = 0;
  std::vector<TestId> order;
  order.reserve(s.n);

  auto gain = [&](std::size_t t) {
    std::size_t g = 0;
    for (auto d : dcov[t]) g += covered[d] ? 0 : 1;
    return g;
  };

  while (order.size() < s.n) {
    std::size_t best = s.n;
    std::size_t best_gain = 0;
    double best_key = 0;
    for (std::size_t t = 0; t < s.n; ++t) {
      if (placed[t]) continue;
      auto g = gain(t);
      double k = gain_key(t, g);
      if (best == s.n || k > best_key) {
        best = t;
        best_key = k;
        best_gain = g;
      }
    }
    if (best_gain == 0 && covered_count > 0) {
      std::fill(covered.begin(), covered.end(), 0);
      covered_count = 0;
      continue;
    }
    placed[best] = 1;
    order.push_back(static_cast<TestId>(best));
    for (auto d : dcov[best]) {
      if (!covered[d]) {
        covered[d] = 1;
        ++covered_count;
      }
    }
  }
  return StrictRanking(std::move(order));
}

double relcon_weight(std::string_view label) {
  // relcon_XX_YY with XX in 10..90
  constexpr std::string_view prefix = "relcon_";
  if (label.size() != prefix.size() + 5 || label.substr(0, prefix.size()) != prefix ||
      label[prefix.size() + 2] != '_') {
    return -1;
  }
  int rel = 0;
  int con = 0;
  auto r = label.substr(prefix.size(), 2);
  auto c = label.substr(prefix.size() + 3, 2);
  if (std::from_chars(r.data(), r.data() + 2, rel).ec != std::errc{} ||
      std::from_chars(c.data(), c.data() + 2, con).ec != std::errc{}) {
    return -1;
  }
  if (rel + con != 100 || rel % 10 != 0 || rel < 10 || rel > 90) return -1;
  return rel / 100.0;
}

}  // namespace

std::vector<double> relevance_scores(const SuiteSnapshot& s) {
  require_delta(s);
  std::vector<double> out(s.n);
  const double denom = static_cast<double>(s.delta.size());
  for (std::size_t t = 0; t < s.n; ++t) {
    out[t] = static_cast<double>(intersection_size(s.coverage[t], s.delta)) / denom;
  }
  return out;
}

std::vector<double> confinedness_scores(const SuiteSnapshot& s) {
  require_delta(s);
  std::vector<double> out(s.n);
  for (std::size_t t = 0; t < s.n; ++t) {
    auto outside = s.coverage[t].size() - intersection_size(s.coverage[t], s.delta);
    out[t] = 1.0 / (1.0 + static_cast<double>(outside));
  }
  return out;
}

StrictRanking prioritize_rel(const SuiteSnapshot& s) {
  return order_by(relevance_scores(s), true);
}

StrictRanking prioritize_con(const SuiteSnapshot& s) {
  return order_by(confinedness_scores(s), true);
}

StrictRanking prioritize_relcon(const SuiteSnapshot& s, double w_rel) {
  if (!(w_rel >= 0.0 && w_rel <= 1.0)) {
    throw Error(ErrorKind::InvalidParams, "relevance weight outside [0,1]");
  }
  auto rel = relevance_scores(s);
  auto con = confinedness_scores(s);
  const double w_con = 1.0 - w_rel;
  std::vector<double> score(s.n);
  for (std::size_t t = 0; t < s.n; ++t) {
    score[t] = w_rel * rel[t] + w_con * con[t];
  }
  return order_by(score, true);
}

StrictRanking prioritize_cost(const SuiteSnapshot& s) {
  require_costs(s);
  return order_by(s.cost, false);
}

StrictRanking prioritize_ga(const SuiteSnapshot& s) {
  require_delta(s);
  return greedy_additional(
      s, [](std::size_t, std::size_t g) { return static_cast<double>(g); });
}

StrictRanking prioritize_costga(const SuiteSnapshot& s) {
  require_delta(s);
  require_costs(s);
  return greedy_additional(s, [&](std::size_t t, std::size_t g) {
    return static_cast<double>(g) / s.cost[t];
  });
}

Trace linearize_trace(const Trace& raw) {
  if (raw.empty()) throw Error(ErrorKind::EmptyTrace, "cannot linearize");
  Trace out;
  std::unordered_set<BlockId> seen;
  for (const auto& step : raw) {
    if (seen.insert(step.block).second) out.push_back(step);
  }
  return out;
}

std::optional<DisplacementProfile> displacement(
    const Trace& path, std::span<const BlockId> sorted_delta, bool weighted) {
  if (path.empty()) throw Error(ErrorKind::EmptyTrace, "empty path");
  // prefix[i] = distance from position 0 to position i
  std::vector<double> prefix(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    double w = weighted ? static_cast<double>(path[i - 1].instructions) : 1.0;
    prefix[i] = prefix[i - 1] + w;
  }
  std::size_t first = path.size();
  std::size_t last = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (std::binary_search(sorted_delta.begin(), sorted_delta.end(), path[i].block)) {
      if (hits == 0) first = i;
      last = i;
      ++hits;
    }
  }
  if (hits == 0) return std::nullopt;
  DisplacementProfile p;
  p.alpha = prefix[first];
  p.gamma = prefix.back() - prefix[last];
  // consecutive gaps telescope
  p.beta = hits > 1 ? (prefix[last] - prefix[first]) / static_cast<double>(hits - 1)
                    : 0.0;
  return p;
}

double displacement_score(const DisplacementProfile& p) {
  return p.alpha + p.beta + p.gamma;
}

StrictRanking prioritize_colosseum(const SuiteSnapshot& s, bool weighted) {
  require_delta(s);
  if (!s.traces || s.traces->size() != s.n) {
    throw Error(ErrorKind::MissingTraces, weighted ? "colw" : "coluw");
  }
  std::vector<double> score(s.n);
  std::vector<char> touches(s.n, 0);
  for (std::size_t t = 0; t < s.n; ++t) {
    const auto& raw = (*s.traces)[t];
    if (raw.empty()) throw Error(ErrorKind::EmptyTrace, "", static_cast<TestId>(t));
    auto prof = displacement(linearize_trace(raw), s.delta, weighted);
    if (prof) {
      touches[t] = 1;
      score[t] = displacement_score(*prof);
    }
  }
  std::vector<TestId> order(s.n);
  std::iota(order.begin(), order.end(), TestId{0});
  std::stable_sort(order.begin(), order.end(), [&](TestId a, TestId b) {
    if (touches[a] != touches[b]) return touches[a] > touches[b];
    return touches[a] && score[a] < score[b];
  });
  return StrictRanking(std::move(order));
}

const std::vector<std::string>& standalone_labels() {
  static const std::vector<std::string> labels = {
      "rel",          "con",          "cost",         "ga",
      "costga",       "relcon_10_90", "relcon_20_80", "relcon_30_70",
      "relcon_40_60", "relcon_50_50", "relcon_60_40", "relcon_70_30",
      "relcon_80_20", "relcon_90_10", "coluw",        "colw"};
  return labels;
}

bool is_standalone_label(std::string_view label) {
  const auto& all = standalone_labels();
  return std::find(all.begin(), all.end(), label) != all.end();
}

bool needs_traces(std::string_view label) {
  return label == "coluw" || label == "colw";
}

StrictRanking prioritize(const SuiteSnapshot& s, std::string_view label) {
  if (label == "rel") return prioritize_rel(s);
  if (label == "con") return prioritize_con(s);
  if (label == "cost") return prioritize_cost(s);
  if (label == "ga") return prioritize_ga(s);
  if (label == "costga") return prioritize_costga(s);
  if (label == "coluw") return prioritize_colosseum(s, false);
  if (label == "colw") return prioritize_colosseum(s, true);
  if (double w = relcon_weight(label); w >= 0) return prioritize_relcon(s, w);
  throw Error(ErrorKind::InvalidParams, "unknown strategy '" + std::string(label) + "'");
}

EnsembleConfig EnsembleConfig::defaults() {
  EnsembleConfig cfg;
  for (const auto& label : standalone_labels()) {
    std::size_t m = 1;
    if (label == "cost") m = 4;
    if (label == "colw") m = 7;
    cfg.items.push_back({label, m});
  }
  return cfg;
}

EnsembleConfig EnsembleConfig::parse(std::istream& in) {
  EnsembleConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string_view body(line.data() + b, e - b + 1);
    auto comma = body.find(',');
    std::string_view label = body.substr(0, comma);
    std::size_t mult = 1;
    if (comma != std::string_view::npos) {
      auto num = body.substr(comma + 1);
      while (!num.empty() && num.front() == ' ') num.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), mult);
      if (num.empty() || ec != std::errc{} || ptr != num.data() + num.size()) {
        throw Error(ErrorKind::InvalidParams,
                    "ensemble config line " + std::to_string(lineno) +
                        ": bad multiplicity");
      }
    }
    while (!label.empty() && label.back() == ' ') label.remove_suffix(1);
    cfg.items.push_back({std::string(label), mult});
  }
  cfg.validate();
  return cfg;
}

std::size_t EnsembleConfig::total() const {
  std::size_t sum = 0;
  for (const auto& item : items) sum += item.multiplicity;
  return sum;
}

bool EnsembleConfig::uses_traces() const {
  return std::any_of(items.begin(), items.end(),
                     [](const Item& i) { return needs_traces(i.label); });
}

void EnsembleConfig::validate() const {
  if (items.empty()) throw Error(ErrorKind::InvalidParams, "empty ensemble config");
  for (const auto& item : items) {
    if (!is_standalone_label(item.label)) {
      throw Error(ErrorKind::InvalidParams, "unknown strategy '" + item.label + "'");
    }
    if (item.multiplicity < 1) {
      throw Error(ErrorKind::InvalidParams, "multiplicity of '" + item.label + "' < 1");
    }
  }
}

namespace {

std::vector<std::string> distinct_labels(const EnsembleConfig& cfg) {
  std::vector<std::string> out;
  for (const auto& item : cfg.items) {
    if (std::find(out.begin(), out.end(), item.label) == out.end()) {
      out.push_back(item.label);
    }
  }
  return out;
}

Ensemble assemble(const EnsembleConfig& cfg,
                  const std::vector<std::string>& labels,
                  const std::vector<StrictRanking>& rankings) {
  std::vector<EnsembleEntry> entries;
  entries.reserve(cfg.total());
  for (const auto& item : cfg.items) {
    auto idx = static_cast<std::size_t>(
        std::find(labels.begin(), labels.end(), item.label) - labels.begin());
    for (std::size_t k = 0; k < item.multiplicity; ++k) {
      entries.push_back({item.label, rankings[idx]});
    }
  }
  return Ensemble(std::move(entries));
}

void precheck(const SuiteSnapshot& s, const EnsembleConfig& cfg) {
  cfg.validate();
  if (cfg.uses_traces() && !s.traces) {
    throw Error(ErrorKind::MissingTraces,
                "colosseum strategies configured but no traces loaded");
  }
}

}  // namespace

Ensemble build_ensemble(const SuiteSnapshot& s, const EnsembleConfig& cfg) {
  precheck(s, cfg);
  auto labels = distinct_labels(cfg);
  std::vector<StrictRanking> rankings(labels.size());
  ExceptionSlot failure;
  const auto count = static_cast<std::ptrdiff_t>(labels.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    failure.run([&] { rankings[i] = prioritize(s, labels[i]); });
  }
  failure.rethrow();
  return assemble(cfg, labels, rankings);
}

Ensemble build_ensemble_serial(const SuiteSnapshot& s,
                               const EnsembleConfig& cfg) {
  precheck(s, cfg);
  auto labels = distinct_labels(cfg);
  std::vector<StrictRanking> rankings;
  rankings.reserve(labels.size());
  for (const auto& label : labels) rankings.push_back(prioritize(s, label));
  return assemble(cfg, labels, rankings);
}

}  // namespace tpagg
