#pragma once

#include <cstdint>
#include <vector>

#include "tpagg/model.hpp"

namespace tpagg {

/// Number of test pairs the two rankings order oppositely.
/// O(n log n) via merge-sort inversion counting.
std::uint64_t kt_distance(const StrictRanking& a, const StrictRanking& b);

/// Symmetric |E|×|E| matrix of pairwise KT distances, row-major.
struct KtMatrix {
  std::size_t size = 0;
  std::vector<std::uint64_t> values;

  std::uint64_t operator()(std::size_t i, std::size_t j) const {
    return values[i * size + j];
  }
};

/// Pairs are distributed over OpenMP threads; the result does not depend
/// on the thread count.
KtMatrix kt_matrix(const Ensemble& e);
/// Single-threaded reference for kt_matrix.
KtMatrix kt_matrix_serial(const Ensemble& e);

/// Div(p_i, E): sum of KT distances from entry i to every other entry.
std::uint64_t diversity_score(std::size_t i, const Ensemble& e);
std::vector<std::uint64_t> diversity_scores(const Ensemble& e);

/// Number of entries a k% budget keeps: max(1, floor(k·size/100)).
std::size_t budget_count(double k_percent, std::size_t size);

struct DiversitySelection {
  std::vector<std::uint64_t> div;
  /// Entry indices by decreasing Div, ties by index.
  std::vector<std::size_t> priority;
  /// The kept indices, in original ensemble order.
  std::vector<std::size_t> selected;
};

DiversitySelection rank_by_diversity(const Ensemble& e, double k_percent);

/// The top-k% most diverse entries, original relative order preserved.
Ensemble select_top_k(const Ensemble& e, double k_percent);

}  // namespace tpagg
