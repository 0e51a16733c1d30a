#pragma once

#include <string>
#include <vector>

#include "tpagg/model.hpp"

namespace tpagg {

/// Batches run one after another; the tests inside a batch run concurrently.
struct ExecutionPlan {
  std::size_t nproc = 1;
  std::vector<std::vector<TestId>> batches;

  std::size_t test_count() const;
};

/// Each tie group becomes a parallel window, cut into consecutive chunks of
/// at most `nproc` tests (ids ascending). Group order is kept.
ExecutionPlan make_plan(const TiedRanking& ranking, std::size_t nproc);

struct TimelineEvent {
  std::size_t batch = 0;  // 1-based
  double completion_time = 0;
  std::size_t cumulative_failures = 0;
};

struct Timeline {
  std::vector<TimelineEvent> events;
};

/// Idealised barrier execution: a batch lasts as long as its most
/// expensive member.
Timeline simulate(const ExecutionPlan& plan, std::span<const double> cost,
                  const FailureRecord& failures);

std::string plan_json(const ExecutionPlan& plan);
ExecutionPlan parse_plan_json(std::string_view text);
/// `batch,completion_time,cum_failures` with a header row.
std::string timeline_csv(const Timeline& timeline);

}  // namespace tpagg
