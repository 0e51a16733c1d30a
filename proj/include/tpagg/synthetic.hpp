#pragma once

#include <cstdint>
#include <filesystem>

#include "tpagg/model.hpp"

namespace tpagg {

struct SyntheticParams {
  std::size_t tests = 100;
  std::size_t blocks = 200;
  double delta_frac = 0.05;
  /// Costs spread over 10^imbalance orders of magnitude; 0 gives equal costs.
  double imbalance = 2.0;
  double fail_frac = 0.1;
  /// Weight of Δ-relevance (vs. noise) when choosing the failing tests.
  double correlation = 0.8;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticScenario {
  SuiteSnapshot snapshot;
  FailureRecord failures;
};

/// Deterministic for a given parameter set, independent of platform.
SyntheticScenario gen_synthetic(const SyntheticParams& params);

/// Writes coverage.csv, delta.txt, cost.csv, traces.jsonl, failures.txt.
void write_scenario(const SyntheticScenario& scenario, const std::filesystem::path& dir);

}  // namespace tpagg
