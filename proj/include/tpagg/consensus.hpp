#pragma once

// Rank aggregation over an ensemble (profile) of strict rankings.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tpagg/model.hpp"

namespace tpagg {

/// Σ over entries of (n(n−1)/2 − KT(p, entry)): the number of pairwise
/// preferences in the profile that `p` honours. Maximising it minimises the
/// summed KT distance.
std::uint64_t agreement_score(const StrictRanking& p, const Ensemble& profile);

/// prefer(a, b) = number of entries ranking a before b.
class PreferenceMatrix {
 public:
  PreferenceMatrix() = default;
  explicit PreferenceMatrix(std::size_t n) : n_(n), counts_(n * n, 0) {}

  std::size_t size() const noexcept { return n_; }
  std::uint32_t prefer(TestId a, TestId b) const { return counts_[a * n_ + b]; }
  std::uint32_t& at(TestId a, TestId b) { return counts_[a * n_ + b]; }

  /// Same value as agreement_score, computed from pair counts in O(n²).
  std::uint64_t score(std::span<const TestId> order) const;

  friend bool operator==(const PreferenceMatrix&, const PreferenceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> counts_;
};

/// Rows are filled by OpenMP threads.
PreferenceMatrix preference_matrix(const Ensemble& profile);
PreferenceMatrix preference_matrix_serial(const Ensemble& profile);

struct KYParams {
  /// Maximum number of full window sweeps (0..200).
  int iterations = 200;
  /// Window size (1..7); clamped to the suite size at run time.
  int window = 7;
  std::uint64_t seed = 0;

  void validate() const;
};

struct KemenyResult {
  StrictRanking ranking;
  std::uint64_t score = 0;
  std::uint64_t initial_score = 0;
  /// Agreement score after each completed sweep.
  std::vector<std::uint64_t> sweep_scores;
  /// Distinct best-scoring orderings the final ranking was averaged over.
  std::size_t optimal_orderings = 1;
  /// True when the rank average scored below the optimum and the nearest
  /// optimal ordering was returned instead.
  bool average_rejected = false;
};

/// Sliding-window Kemeny-Young approximation. Starts from the flattened
/// arithmetic-mean consensus and hill-climbs: each window position tries
/// every arrangement of its contents and moves to a best one when that
/// strictly improves the agreement score. Equally good arrangements are
/// chosen between with the seeded generator. Stops after `iterations`
/// sweeps or at the first sweep without improvement.
KemenyResult kemeny_young_run(const Ensemble& profile, const KYParams& params);
StrictRanking kemeny_young(const Ensemble& profile, const KYParams& params);

/// Exhaustive optimum for n ≤ 8; the lexicographically smallest optimal
/// order is returned.
StrictRanking kemeny_exact(const Ensemble& profile);

/// Σ over entries of (n − rank(t)).
std::vector<std::uint64_t> borda_scores(const Ensemble& profile);
TiedRanking borda(const Ensemble& profile);

enum class MeanOp { Arithmetic, Geometric, Harmonic, Median };

/// Per-test aggregate of 1-based ranks, floored to an integer.
std::vector<std::uint64_t> mean_keys(const Ensemble& profile, MeanOp op);
TiedRanking mean_consensus(const Ensemble& profile, MeanOp op);

enum class Method { KemenyYoung, Borda, AM, GM, HM, Median };

std::string_view method_label(Method m);
std::optional<Method> parse_method(std::string_view label);
const std::vector<Method>& all_methods();

struct ConsensusResult {
  Method method;
  TiedRanking ranking;
  /// agreement_score of the flattened ranking.
  std::uint64_t agreement = 0;
  /// KY only.
  std::optional<KemenyResult> kemeny;
};

ConsensusResult run_consensus(const Ensemble& profile, Method method,
                              const KYParams& params);

}  // namespace tpagg
