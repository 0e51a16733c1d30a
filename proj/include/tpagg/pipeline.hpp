#pragma once

// End-to-end orchestration: prioritize -> select -> aggregate -> schedule ->
// evaluate, writing every intermediate artifact under one directory.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tpagg/consensus.hpp"
#include "tpagg/diversity.hpp"
#include "tpagg/heuristics.hpp"
#include "tpagg/io.hpp"
#include "tpagg/metrics.hpp"

namespace tpagg {

struct PipelineConfig {
  SnapshotPaths snapshot;
  std::optional<std::filesystem::path> failures;
  std::optional<std::filesystem::path> ensemble_config;
  std::vector<double> budgets{75.0};
  std::vector<Method> methods{Method::KemenyYoung};
  KYParams ky;
  std::size_t nproc = 4;
  std::filesystem::path out;

  void validate() const;
};

/// "75", "12.5", ... as used in output labels.
std::string budget_label(double k_percent);
/// `<method>_<k>`, e.g. ky_75.
std::string consensus_label(Method m, double k_percent);

std::string diversity_csv(const Ensemble& e, const DiversitySelection& sel);
std::string consensus_json(const std::string& label, const ConsensusResult& result,
                           double k_percent, std::size_t ensemble_size,
                           std::size_t selected, const KYParams& params);

struct PipelineSummary {
  std::vector<MetricRow> metrics;
  std::vector<std::filesystem::path> written;
};

/// Output tree (relative to cfg.out):
///   names.txt, ensemble.json, metrics.csv
///   standalone/<label>.json
///   selection/top_<k>/{diversity.csv,selected.json}
///   consensus/<method>_<k>.json, plan/<method>_<k>.json
///   timeline/<method>_<k>.csv            (when failures are given)
PipelineSummary run_pipeline(const PipelineConfig& cfg);

}  // namespace tpagg
