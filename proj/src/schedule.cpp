#include "tpagg/schedule.hpp"

#include <algorithm>

#include "json.hpp"
#include "tpagg/io.hpp"

namespace tpagg {

std::size_t ExecutionPlan::test_count() const {
  std::size_t total = 0;
  for (const auto& b : batches) total += b.size();
  return total;
}

ExecutionPlan make_plan(const TiedRanking& ranking, std::size_t nproc) {
  if (nproc < 1) throw Error(ErrorKind::InvalidParams, "nproc must be >= 1");
  ExecutionPlan plan;
  plan.nproc = nproc;
  for (const auto& group : ranking.groups()) {
    for (std::size_t start = 0; start < group.size(); start += nproc) {
      auto end = std::min(group.size(), start + nproc);
      plan.batches.emplace_back(group.begin() + static_cast<std::ptrdiff_t>(start),
                                group.begin() + static_cast<std::ptrdiff_t>(end));
    }
  }
  return plan;
}

Timeline simulate(const ExecutionPlan& plan, std::span<const double> cost,
                  const FailureRecord& failures) {
  Timeline tl;
  double clock = 0;
  std::size_t failed = 0;
  for (std::size_t b = 0; b < plan.batches.size(); ++b) {
    double duration = 0;
    for (TestId t : plan.batches[b]) {
      if (t >= cost.size()) throw Error(ErrorKind::MissingCost, "", t);
      duration = std::max(duration, cost[t]);
      if (failures.contains(t)) ++failed;
    }
    clock += duration;
    tl.events.push_back({b + 1, clock, failed});
  }
  return tl;
}

std::string plan_json(const ExecutionPlan& plan) {
  nlohmann::ordered_json obj;
  obj["nproc"] = plan.nproc;
  auto batches = nlohmann::ordered_json::array();
  for (const auto& b : plan.batches) batches.push_back(b);
  obj["batches"] = std::move(batches);
  return obj.dump();
}

ExecutionPlan parse_plan_json(std::string_view text) {
  try {
    auto obj = nlohmann::json::parse(text);
    ExecutionPlan plan;
    plan.nproc = obj.at("nproc").get<std::size_t>();
    for (const auto& b : obj.at("batches")) {
      plan.batches.push_back(b.get<std::vector<TestId>>());
      if (plan.batches.back().empty() || plan.batches.back().size() > plan.nproc) {
        throw Error(ErrorKind::MalformedFile, "batch size outside [1, nproc]");
      }
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedFile, e.what());
  }
}

std::string timeline_csv(const Timeline& timeline) {
  std::string out = "batch,completion_time,cum_failures\n";
  for (const auto& ev : timeline.events) {
    out += std::to_string(ev.batch) + "," + format_number(ev.completion_time) +
           "," + std::to_string(ev.cumulative_failures) + "\n";
  }
  return out;
}

}  // namespace tpagg
