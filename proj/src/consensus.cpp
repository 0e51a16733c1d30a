#include "tpagg/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "tpagg/diversity.hpp"
#include "tpagg/parallel.hpp"

namespace tpagg {

namespace {

std::uint64_t pair_count(std::size_t n) {
  return n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
}

void require_profile(const Ensemble& profile) {
  if (profile.empty()) throw Error(ErrorKind::InvalidParams, "empty profile");
}

// Groups tests by key; ascending or descending key order, ids ascending.
TiedRanking group_by_key(const std::vector<std::uint64_t>& key, bool descending) {
  std::map<std::uint64_t, std::vector<TestId>> buckets;
  for (std::size_t t = 0; t < key.size(); ++t) {
    buckets[key[t]].push_back(static_cast<TestId>(t));
  }
  std::vector<std::vector<TestId>> groups;
  groups.reserve(buckets.size());
  if (descending) {
    for (auto it = buckets.rbegin(); it != buckets.rend(); ++it) {
      groups.push_back(std::move(it->second));
    }
  } else {
    for (auto& [k, ids] : buckets) groups.push_back(std::move(ids));
  }
  return TiedRanking(std::move(groups), key.size());
}

// Floor that tolerates values computed a hair below an integer.
std::uint64_t floor_key(long double value) {
  return static_cast<std::uint64_t>(std::floor(value + 1e-9L));
}

}  // namespace

std::uint64_t agreement_score(const StrictRanking& p, const Ensemble& profile) {
  require_profile(profile);
  if (p.size() != profile.suite_size()) {
    throw Error(ErrorKind::SuiteMismatch, "ranking and profile sizes differ");
  }
  const std::uint64_t pairs = pair_count(p.size());
  std::uint64_t total = 0;
  for (const auto& entry : profile) total += pairs - kt_distance(p, entry.ranking);
  return total;
}

std::uint64_t PreferenceMatrix::score(std::span<const TestId> order) const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto* row = &counts_[order[i] * n_];
    for (std::size_t j = i + 1; j < order.size(); ++j) total += row[order[j]];
  }
  return total;
}

PreferenceMatrix preference_matrix_serial(const Ensemble& profile) {
  require_profile(profile);
  const std::size_t n = profile.suite_size();
  PreferenceMatrix w(n);
  for (const auto& entry : profile) {
    auto order = entry.ranking.order();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) ++w.at(order[i], order[j]);
    }
  }
  return w;
}

PreferenceMatrix preference_matrix(const Ensemble& profile) {
  require_profile(profile);
  const std::size_t n = profile.suite_size();
  PreferenceMatrix w(n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t a = 0; a < rows; ++a) {
    const auto ta = static_cast<TestId>(a);
    for (const auto& entry : profile) {
      // everything after ta in this entry is preferred less
      auto order = entry.ranking.order();
      for (std::size_t j = entry.ranking.rank(ta); j < n; ++j) ++w.at(ta, order[j]);
    }
  }
  return w;
}

void KYParams::validate() const {
  if (iterations < 0 || iterations > 200) {
    throw Error(ErrorKind::InvalidParams, "iterations N must lie in [0, 200]");
  }
  if (window < 1 || window > 7) {
    throw Error(ErrorKind::InvalidParams, "window M must lie in [1, 7]");
  }
}

namespace {

// Score of the pairs inside a window for one arrangement of it.
std::uint64_t window_score(const std::vector<std::uint32_t>& local,
                           std::size_t len, const std::vector<std::size_t>& perm) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const auto* row = &local[perm[i] * len];
    for (std::size_t j = i + 1; j < len; ++j) s += row[perm[j]];
  }
  return s;
}

struct LastMove {
  std::size_t pos = 0;
  std::vector<TestId> window;
  std::vector<std::vector<std::size_t>> arrangements;
};

}  // namespace

KemenyResult kemeny_young_run(const Ensemble& profile, const KYParams& params) {
  require_profile(profile);
  params.validate();
  const std::size_t n = profile.suite_size();
  const auto w = preference_matrix(profile);

  const auto initial = flatten(mean_consensus(profile, MeanOp::Arithmetic));
  std::vector<TestId> current(initial.order().begin(), initial.order().end());
  std::uint64_t score = w.score(current);

  KemenyResult result;
  result.initial_score = score;

  const std::size_t window = std::min<std::size_t>(static_cast<std::size_t>(params.window), n);
  std::mt19937_64 rng(params.seed);
  std::optional<LastMove> last_move;

  std::vector<std::uint32_t> local;
  std::vector<std::size_t> perm;
  std::vector<std::vector<std::size_t>> ties;

  for (int iter = 0; iter < params.iterations; ++iter) {
    bool improved = false;
    for (std::size_t pos = 0; pos + 1 < n && window > 1; ++pos) {
      const std::size_t len = std::min(window, n - pos);
      local.assign(len * len, 0);
      for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t j = 0; j < len; ++j) {
          local[i * len + j] = w.prefer(current[pos + i], current[pos + j]);
        }
      }
      perm.resize(len);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      const std::uint64_t base = window_score(local, len, perm);
      std::uint64_t best = base;
      ties.clear();
      do {
        auto s = window_score(local, len, perm);
        if (s > best) {
          best = s;
          ties.clear();
        }
        if (s == best && s > base) ties.push_back(perm);
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (ties.empty()) continue;

      const auto& chosen = ties[rng() % ties.size()];
      std::vector<TestId> before(current.begin() + static_cast<std::ptrdiff_t>(pos),
                                 current.begin() + static_cast<std::ptrdiff_t>(pos + len));
      for (std::size_t i = 0; i < len; ++i) current[pos + i] = before[chosen[i]];
      score += best - base;
      improved = true;
      last_move = LastMove{pos, std::move(before), ties};
    }
    result.sweep_scores.push_back(score);
    if (!improved) break;
  }

  result.score = score;
  if (!last_move || last_move->arrangements.size() < 2) {
    result.ranking = StrictRanking(std::move(current));
    return result;
  }

  // Several orderings reached the best score at the final improving move;
  // they differ only inside that window. Average the ranks across them.
  const auto& mv = *last_move;
  const std::size_t len = mv.window.size();
  result.optimal_orderings = mv.arrangements.size();
  std::vector<double> mean_pos(len, 0.0);
  for (const auto& arr : mv.arrangements) {
    for (std::size_t i = 0; i < len; ++i) {
      mean_pos[arr[i]] += static_cast<double>(i);
    }
  }
  std::vector<std::size_t> avg_order(len);
  std::iota(avg_order.begin(), avg_order.end(), std::size_t{0});
  std::stable_sort(avg_order.begin(), avg_order.end(), [&](std::size_t a, std::size_t b) {
    if (mean_pos[a] != mean_pos[b]) return mean_pos[a] < mean_pos[b];
    return mv.window[a] < mv.window[b];
  });
  auto averaged = current;
  for (std::size_t i = 0; i < len; ++i) averaged[mv.pos + i] = mv.window[avg_order[i]];

  if (w.score(averaged) == score) {
    result.ranking = StrictRanking(std::move(averaged));
    return result;
  }
  // The average left the optimal set: fall back to its nearest member.
  result.average_rejected = true;
  StrictRanking avg_ranking(averaged);
  std::optional<std::uint64_t> best_dist;
  std::vector<TestId> nearest;
  for (const auto& arr : mv.arrangements) {
    auto candidate = current;
    for (std::size_t i = 0; i < len; ++i) candidate[mv.pos + i] = mv.window[arr[i]];
    auto d = kt_distance(StrictRanking(candidate), avg_ranking);
    if (!best_dist || d < *best_dist) {
      best_dist = d;
      nearest = std::move(candidate);
    }
  }
  result.ranking = StrictRanking(std::move(nearest));
  return result;
}

StrictRanking kemeny_young(const Ensemble& profile, const KYParams& params) {
  return kemeny_young_run(profile, params).ranking;
}

StrictRanking kemeny_exact(const Ensemble& profile) {
  require_profile(profile);
  const std::size_t n = profile.suite_size();
  if (n > 8) {
    throw Error(ErrorKind::TooLarge, "exhaustive search limited to n <= 8, got " +
                                         std::to_string(n));
  }
  std::vector<TestId> order(n);
  std::iota(order.begin(), order.end(), TestId{0});
  std::vector<TestId> best_order = order;
  std::optional<std::uint64_t> best;
  do {
    auto s = agreement_score(StrictRanking(order), profile);
    if (!best || s > *best) {
      best = s;
      best_order = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return StrictRanking(std::move(best_order));
}

std::vector<std::uint64_t> borda_scores(const Ensemble& profile) {
  require_profile(profile);
  const std::size_t n = profile.suite_size();
  std::vector<std::uint64_t> score(n, 0);
  for (const auto& entry : profile) {
    for (std::size_t t = 0; t < n; ++t) {
      score[t] += n - entry.ranking.rank(static_cast<TestId>(t));
    }
  }
  return score;
}

TiedRanking borda(const Ensemble& profile) {
  return group_by_key(borda_scores(profile), true);
}

std::vector<std::uint64_t> mean_keys(const Ensemble& profile, MeanOp op) {
  require_profile(profile);
  const std::size_t n = profile.suite_size();
  const std::size_t m = profile.size();
  std::vector<std::uint64_t> key(n);
  std::vector<std::uint64_t> ranks(m);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t e = 0; e < m; ++e) {
      ranks[e] = profile[e].ranking.rank(static_cast<TestId>(t));
    }
    switch (op) {
      case MeanOp::Arithmetic: {
        key[t] = std::accumulate(ranks.begin(), ranks.end(), std::uint64_t{0}) / m;
        break;
      }
      case MeanOp::Geometric: {
        long double log_sum = 0;
        for (auto r : ranks) log_sum += std::log(static_cast<long double>(r));
        key[t] = floor_key(std::exp(log_sum / static_cast<long double>(m)));
        break;
      }
      case MeanOp::Harmonic: {
        long double inv_sum = 0;
        for (auto r : ranks) inv_sum += 1.0L / static_cast<long double>(r);
        key[t] = floor_key(static_cast<long double>(m) / inv_sum);
        break;
      }
      case MeanOp::Median: {
        std::sort(ranks.begin(), ranks.end());
        key[t] = m % 2 == 1 ? ranks[m / 2] : (ranks[m / 2 - 1] + ranks[m / 2]) / 2;
        break;
      }
    }
  }
  return key;
}

TiedRanking mean_consensus(const Ensemble& profile, MeanOp op) {
  return group_by_key(mean_keys(profile, op), false);
}

std::string_view method_label(Method m) {
  switch (m) {
    case Method::KemenyYoung: return "ky";
    case Method::Borda: return "borda";
    case Method::AM: return "am";
    case Method::GM: return "gm";
    case Method::HM: return "hm";
    case Method::Median: return "med";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view label) {
  for (auto m : all_methods()) {
    if (method_label(m) == label) return m;
  }
  return std::nullopt;
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {Method::Borda, Method::KemenyYoung,
                                              Method::AM,    Method::GM,
                                              Method::HM,    Method::Median};
  return methods;
}

ConsensusResult run_consensus(const Ensemble& profile, Method method,
                              const KYParams& params) {
  ConsensusResult out{method, {}, 0, std::nullopt};
  switch (method) {
    case Method::KemenyYoung: {
      auto run = kemeny_young_run(profile, params);
      out.ranking = TiedRanking::from_strict(run.ranking);
      out.kemeny = std::move(run);
      break;
    }
    case Method::Borda: out.ranking = borda(profile); break;
    case Method::AM: out.ranking = mean_consensus(profile, MeanOp::Arithmetic); break;
    case Method::GM: out.ranking = mean_consensus(profile, MeanOp::Geometric); break;
    case Method::HM: out.ranking = mean_consensus(profile, MeanOp::Harmonic); break;
    case Method::Median: out.ranking = mean_consensus(profile, MeanOp::Median); break;
  }
  out.agreement = agreement_score(flatten(out.ranking), profile);
  return out;
}

}  // namespace tpagg
