#include "tpagg/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tpagg/parallel.hpp"

namespace tpagg {

namespace {

std::uint64_t count_inversions(std::vector<std::uint32_t>& v,
                               std::vector<std::uint32_t>& scratch,
                               std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(v, scratch, lo, mid) +
                      count_inversions(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[i] <= v[j]) {
      scratch[k++] = v[i++];
    } else {
      inv += mid - i;
      scratch[k++] = v[j++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

void require_ensemble(const Ensemble& e) {
  if (e.size() < 2) {
    throw Error(ErrorKind::SingletonEnsemble, "diversity needs at least two rankings");
  }
}

}  // namespace

std::uint64_t kt_distance(const StrictRanking& a, const StrictRanking& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::SuiteMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " tests");
  }
  // Walk a's order and read off b's ranks; inversions are disagreements.
  std::vector<std::uint32_t> seq(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) seq[i] = b.rank(a.at(i));
  std::vector<std::uint32_t> scratch(seq.size());
  return count_inversions(seq, scratch, 0, seq.size());
}

KtMatrix kt_matrix_serial(const Ensemble& e) {
  KtMatrix m{e.size(), std::vector<std::uint64_t>(e.size() * e.size(), 0)};
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      auto d = kt_distance(e[i].ranking, e[j].ranking);
      m.values[i * m.size + j] = d;
      m.values[j * m.size + i] = d;
    }
  }
  return m;
}

KtMatrix kt_matrix(const Ensemble& e) {
  const std::size_t size = e.size();
  KtMatrix m{size, std::vector<std::uint64_t>(size * size, 0)};
  // Flatten the upper triangle so every pair is one unit of work.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(size * (size - (size > 0 ? 1 : 0)) / 2);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) pairs.emplace_back(i, j);
  }
  const auto count = static_cast<std::ptrdiff_t>(pairs.size());
  ExceptionSlot failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t p = 0; p < count; ++p) {
    failure.run([&] {
      auto [i, j] = pairs[static_cast<std::size_t>(p)];
      auto d = kt_distance(e[i].ranking, e[j].ranking);
      m.values[i * size + j] = d;
      m.values[j * size + i] = d;
    });
  }
  failure.rethrow();
  return m;
}

std::uint64_t diversity_score(std::size_t i, const Ensemble& e) {
  require_ensemble(e);
  if (i >= e.size()) throw Error(ErrorKind::InvalidParams, "entry index out of range");
  std::uint64_t sum = 0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (j != i) sum += kt_distance(e[i].ranking, e[j].ranking);
  }
  return sum;
}

std::vector<std::uint64_t> diversity_scores(const Ensemble& e) {
  require_ensemble(e);
  auto m = kt_matrix(e);
  std::vector<std::uint64_t> div(e.size(), 0);
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = 0; j < e.size(); ++j) div[i] += m(i, j);
  }
  return div;
}

std::size_t budget_count(double k_percent, std::size_t size) {
  if (!(k_percent > 0.0 && k_percent <= 100.0)) {
    throw Error(ErrorKind::InvalidParams, "budget must lie in (0, 100]");
  }
  // The epsilon absorbs representation error in k (e.g. 28 * 25 / 100).
  auto kept = static_cast<std::size_t>(
      std::floor(k_percent * static_cast<double>(size) / 100.0 + 1e-9));
  return std::clamp<std::size_t>(kept, 1, size);
}

DiversitySelection rank_by_diversity(const Ensemble& e, double k_percent) {
  require_ensemble(e);
  const std::size_t keep = budget_count(k_percent, e.size());
  DiversitySelection sel;
  sel.div = diversity_scores(e);
  sel.priority.resize(e.size());
  std::iota(sel.priority.begin(), sel.priority.end(), std::size_t{0});
  std::stable_sort(sel.priority.begin(), sel.priority.end(),
                   [&](std::size_t a, std::size_t b) { return sel.div[a] > sel.div[b]; });
  sel.selected.assign(sel.priority.begin(),
                      sel.priority.begin() + static_cast<std::ptrdiff_t>(keep));
  std::sort(sel.selected.begin(), sel.selected.end());
  return sel;
}

Ensemble select_top_k(const Ensemble& e, double k_percent) {
  auto sel = rank_by_diversity(e, k_percent);
  return e.subset(sel.selected);
}

}  // namespace tpagg
