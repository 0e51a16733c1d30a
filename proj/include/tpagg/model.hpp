#pragma once

// Core domain types: rankings over a dense test-id space, ensembles of
// rankings, and the per-version suite snapshot the heuristics consume.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tpagg/error.hpp"

namespace tpagg {

using TestId = std::uint32_t;
using BlockId = std::uint64_t;

/// A total order over tests 0..n-1. Position 0 is the highest priority.
/// Ranks are 1-based: rank(t) == 1 + index of t in order().
class StrictRanking {
 public:
  StrictRanking() = default;

  /// Validates that `order` is a permutation of 0..n-1 (n = order.size()).
  explicit StrictRanking(std::vector<TestId> order);

  /// Identity ranking 0, 1, ..., n-1.
  static StrictRanking identity(std::size_t n);

  std::size_t size() const noexcept { return order_.size(); }
  std::span<const TestId> order() const noexcept { return order_; }
  TestId at(std::size_t position) const { return order_.at(position); }
  std::uint32_t rank(TestId t) const { return rank_.at(t); }
  std::span<const std::uint32_t> ranks() const noexcept { return rank_; }

  StrictRanking reversed() const;

  friend bool operator==(const StrictRanking& a, const StrictRanking& b) {
    return a.order_ == b.order_;
  }

 private:
  std::vector<TestId> order_;
  std::vector<std::uint32_t> rank_;
};

/// Checks that `order` is a permutation of 0..n-1. Returns the first
/// violation found (UnknownTest, DuplicateTest, then MissingTest).
std::optional<Error> validate_strict(std::span<const TestId> order,
                                     std::size_t n);

/// An ordered sequence of tie groups. Every test of group g has rank g+1.
/// Groups are stored with ids ascending.
class TiedRanking {
 public:
  TiedRanking() = default;
  /// Validates disjointness, non-emptiness, and coverage of 0..n-1.
  TiedRanking(std::vector<std::vector<TestId>> groups, std::size_t n);

  static TiedRanking from_strict(const StrictRanking& r);

  std::size_t size() const noexcept { return n_; }
  const std::vector<std::vector<TestId>>& groups() const noexcept {
    return groups_;
  }
  std::uint32_t rank(TestId t) const { return rank_.at(t); }
  bool is_strict() const noexcept { return groups_.size() == n_; }

  friend bool operator==(const TiedRanking& a, const TiedRanking& b) {
    return a.groups_ == b.groups_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<TestId>> groups_;
  std::vector<std::uint32_t> rank_;
};

/// Expands groups in order, ids ascending within each group.
StrictRanking flatten(const TiedRanking& t);

struct EnsembleEntry {
  std::string label;
  StrictRanking ranking;
};

/// Ordered multiset of rankings over one suite. Repeated entries are kept:
/// multiplicity acts as voter weight.
class Ensemble {
 public:
  Ensemble() = default;
  explicit Ensemble(std::vector<EnsembleEntry> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  /// Suite size shared by all entries.
  std::size_t suite_size() const noexcept { return n_; }
  const EnsembleEntry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<EnsembleEntry>& entries() const noexcept {
    return entries_;
  }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  Ensemble subset(std::span<const std::size_t> indices) const;

 private:
  std::size_t n_ = 0;
  std::vector<EnsembleEntry> entries_;
};

struct TraceStep {
  BlockId block;
  std::uint64_t instructions;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

using Trace = std::vector<TraceStep>;

/// Dense id <-> external test name mapping.
class NameTable {
 public:
  NameTable() = default;
  explicit NameTable(std::vector<std::string> names);

  static NameTable numeric(std::size_t n);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(TestId t) const { return names_.at(t); }
  std::optional<TestId> find(std::string_view name) const;
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::pair<std::string, TestId>> sorted_;
};

/// Everything known about one version pair before execution.
struct SuiteSnapshot {
  std::size_t n = 0;
  /// Block ids covered by each test, ascending and unique.
  std::vector<std::vector<BlockId>> coverage;
  /// Changed blocks, ascending and unique.
  std::vector<BlockId> delta;
  std::vector<double> cost;
  /// Raw (possibly looping) execution paths, when available.
  std::optional<std::vector<Trace>> traces;
  NameTable names;
  std::vector<std::string> warnings;

  /// Checks every structural invariant; throws Error on violation.
  void validate() const;
};

struct FailureRecord {
  /// Failing tests, ascending and unique.
  std::vector<TestId> failed;

  bool contains(TestId t) const;
  std::size_t count() const noexcept { return failed.size(); }
};

}  // namespace tpagg
