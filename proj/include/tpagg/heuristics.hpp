#pragma once

// The sixteen standalone prioritization strategies and ensemble assembly.
// Every strategy returns a strict ranking; score ties break by ascending id.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tpagg/model.hpp"

namespace tpagg {

/// |cov(t) ∩ Δ| / |Δ| for every test.
std::vector<double> relevance_scores(const SuiteSnapshot& s);
/// 1 / (1 + |cov(t) − Δ|) for every test.
std::vector<double> confinedness_scores(const SuiteSnapshot& s);

StrictRanking prioritize_rel(const SuiteSnapshot& s);
StrictRanking prioritize_con(const SuiteSnapshot& s);
/// Descending w_rel·rel(t) + (1 − w_rel)·con(t).
StrictRanking prioritize_relcon(const SuiteSnapshot& s, double w_rel);
StrictRanking prioritize_cost(const SuiteSnapshot& s);
/// Greedy additional Δ-coverage; the covered set resets once no remaining
/// test adds anything new.
StrictRanking prioritize_ga(const SuiteSnapshot& s);
/// Greedy additional with key (new Δ-blocks) / cost(t).
StrictRanking prioritize_costga(const SuiteSnapshot& s);

/// Keeps the first visit of each block, preserving order.
Trace linearize_trace(const Trace& raw);

struct DisplacementProfile {
  double alpha = 0;  // start of path -> first delta block
  double beta = 0;   // mean gap between consecutive delta blocks
  double gamma = 0;  // last delta block -> end of path
};

/// Displacement of the delta blocks along an already linearized path, or
/// nullopt when the path touches no delta block. A step from the block at
/// position i costs 1 (unweighted) or its instruction count (weighted).
std::optional<DisplacementProfile> displacement(
    const Trace& path, std::span<const BlockId> sorted_delta, bool weighted);

/// Single scalar used to order tests by displacement (lower runs first).
double displacement_score(const DisplacementProfile& p);

StrictRanking prioritize_colosseum(const SuiteSnapshot& s, bool weighted);

/// The sixteen strategy labels in canonical order.
const std::vector<std::string>& standalone_labels();
bool is_standalone_label(std::string_view label);
bool needs_traces(std::string_view label);

/// Dispatches on a strategy label.
StrictRanking prioritize(const SuiteSnapshot& s, std::string_view label);

struct EnsembleConfig {
  struct Item {
    std::string label;
    std::size_t multiplicity = 1;
  };
  std::vector<Item> items;

  /// rel, con, cost×4, ga, costga, relcon_10_90..relcon_90_10, coluw, colw×7.
  static EnsembleConfig defaults();
  /// `label,multiplicity` per line; blank lines and '#' comments skipped.
  static EnsembleConfig parse(std::istream& in);

  std::size_t total() const;
  bool uses_traces() const;
  void validate() const;
};

/// Evaluates each distinct configured strategy once (in parallel when
/// built with OpenMP) and lays out the entries in configuration order.
Ensemble build_ensemble(const SuiteSnapshot& s, const EnsembleConfig& cfg);

/// Serial counterpart of build_ensemble, kept as the reference path.
Ensemble build_ensemble_serial(const SuiteSnapshot& s,
                               const EnsembleConfig& cfg);

}  // namespace tpagg
