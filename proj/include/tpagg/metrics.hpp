#pragma once

// Effectiveness of an execution order against the observed failures.
// All values lie in [0, 1]; higher is better. APFD and APFD_c are undefined
// without failures and come back as nullopt.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tpagg/model.hpp"
#include "tpagg/schedule.hpp"

namespace tpagg {

std::optional<double> apfd(const StrictRanking& order, const FailureRecord& failures);

/// Cost-cognizant APFD with unit fault severities.
std::optional<double> apfd_c(const StrictRanking& order, std::span<const double> cost,
                             const FailureRecord& failures);

/// 1 − d / (2·min(m, n−m)) where d is the Manhattan distance between the
/// verdict vector and the failures-first ideal; 1 when m ∈ {0, n}.
double eps(const StrictRanking& order, const FailureRecord& failures);

/// APFD over the plan's timeline: a failure's position is its batch index
/// and the suite length is the number of batches.
std::optional<double> apfd_by_batch(const ExecutionPlan& plan,
                                    const FailureRecord& failures);

struct MetricRow {
  std::string strategy;
  std::optional<double> apfd;
  std::optional<double> apfd_c;
  double eps = 1.0;
};

MetricRow evaluate(std::string strategy, const StrictRanking& order,
                   std::span<const double> cost, const FailureRecord& failures);

/// `strategy,apfd,apfd_c,eps`, six decimals, NA for undefined cells.
std::string metrics_csv(const std::vector<MetricRow>& rows);

}  // namespace tpagg
