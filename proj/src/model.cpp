#include "tpagg/model.hpp"

#include <algorithm>
#include <numeric>

namespace tpagg {

std::optional<Error> validate_strict(std::span<const TestId> order,
                                     std::size_t n) {
  std::vector<bool> seen(n, false);
  for (TestId t : order) {
    if (t >= n) return Error(ErrorKind::UnknownTest, "id outside suite", t);
    if (seen[t]) return Error(ErrorKind::DuplicateTest, "repeated id", t);
    seen[t] = true;
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (!seen[t]) {
      return Error(ErrorKind::MissingTest, "id absent from ranking",
                   static_cast<TestId>(t));
    }
  }
  return std::nullopt;
}

StrictRanking::StrictRanking(std::vector<TestId> order)
    : order_(std::move(order)) {
  if (auto err = validate_strict(order_, order_.size())) throw *err;
  rank_.resize(order_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) {
    rank_[order_[i]] = static_cast<std::uint32_t>(i + 1);
  }
}

StrictRanking StrictRanking::identity(std::size_t n) {
  std::vector<TestId> order(n);
  std::iota(order.begin(), order.end(), TestId{0});
  return StrictRanking(std::move(order));
}

StrictRanking StrictRanking::reversed() const {
  return StrictRanking(std::vector<TestId>(order_.rbegin(), order_.rend()));
}

TiedRanking::TiedRanking(std::vector<std::vector<TestId>> groups,
                         std::size_t n)
    : n_(n), groups_(std::move(groups)), rank_(n, 0) {
  std::size_t total = 0;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    auto& group = groups_[g];
    if (group.empty()) {
      throw Error(ErrorKind::MalformedFile, "empty tie group");
    }
    std::sort(group.begin(), group.end());
    for (TestId t : group) {
      if (t >= n) throw Error(ErrorKind::UnknownTest, "id outside suite", t);
      if (rank_[t] != 0) {
        throw Error(ErrorKind::DuplicateTest, "id in two groups", t);
      }
      rank_[t] = static_cast<std::uint32_t>(g + 1);
    }
    total += group.size();
  }
  if (total != n) {
    for (std::size_t t = 0; t < n; ++t) {
      if (rank_[t] == 0) {
        throw Error(ErrorKind::MissingTest, "id absent from ranking",
                    static_cast<TestId>(t));
      }
    }
  }
}

TiedRanking TiedRanking::from_strict(const StrictRanking& r) {
  std::vector<std::vector<TestId>> groups;
  groups.reserve(r.size());
  for (TestId t : r.order()) groups.push_back({t});
  return TiedRanking(std::move(groups), r.size());
}

StrictRanking flatten(const TiedRanking& t) {
  std::vector<TestId> order;
  order.reserve(t.size());
  for (const auto& group : t.groups()) {
    order.insert(order.end(), group.begin(), group.end());
  }
  return StrictRanking(std::move(order));
}

Ensemble::Ensemble(std::vector<EnsembleEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw Error(ErrorKind::InvalidParams, "ensemble needs at least one entry");
  }
  n_ = entries_.front().ranking.size();
  for (const auto& e : entries_) {
    if (e.ranking.size() != n_) {
      throw Error(ErrorKind::SuiteMismatch,
                  "entry '" + e.label + "' ranks " +
                      std::to_string(e.ranking.size()) + " tests, expected " +
                      std::to_string(n_));
    }
  }
}

Ensemble Ensemble::subset(std::span<const std::size_t> indices) const {
  std::vector<EnsembleEntry> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(entries_.at(i));
  return Ensemble(std::move(out));
}

NameTable::NameTable(std::vector<std::string> names)
    : names_(std::move(names)) {
  sorted_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    sorted_.emplace_back(names_[i], static_cast<TestId>(i));
  }
  std::sort(sorted_.begin(), sorted_.end());
  auto dup = std::adjacent_find(
      sorted_.begin(), sorted_.end(),
      [](const auto& a, const auto& b) { return a.first == b.first; });
  if (dup != sorted_.end()) {
    throw Error(ErrorKind::DuplicateTest, "test '" + dup->first + "' listed twice",
                dup->second);
  }
}

NameTable NameTable::numeric(std::size_t n) {
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = std::to_string(i);
  return NameTable(std::move(names));
}

std::optional<TestId> NameTable::find(std::string_view name) const {
  auto it = std::lower_bound(
      sorted_.begin(), sorted_.end(), name,
      [](const auto& entry, std::string_view key) { return entry.first < key; });
  if (it == sorted_.end() || it->first != name) return std::nullopt;
  return it->second;
}

void SuiteSnapshot::validate() const {
  if (coverage.size() != n) {
    throw Error(ErrorKind::MissingTest, "coverage rows != suite size",
                static_cast<TestId>(std::min(coverage.size(), n)));
  }
  if (cost.size() != n) {
    throw Error(ErrorKind::MissingTest, "cost entries != suite size",
                static_cast<TestId>(std::min(cost.size(), n)));
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (!(cost[t] > 0.0)) {
      throw Error(ErrorKind::NonPositiveCost, "cost must be positive",
                  static_cast<TestId>(t));
    }
  }
  if (traces) {
    if (traces->size() != n) {
      throw Error(ErrorKind::MissingTraces, "trace count != suite size");
    }
    for (std::size_t t = 0; t < n; ++t) {
      if ((*traces)[t].empty()) {
        throw Error(ErrorKind::EmptyTrace, "no path recorded",
                    static_cast<TestId>(t));
      }
    }
  }
}

bool FailureRecord::contains(TestId t) const {
  return std::binary_search(failed.begin(), failed.end(), t);
}

}  // namespace tpagg
