#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tpagg/consensus.hpp"
#include "tpagg/diversity.hpp"

using namespace tpagg;

TEST_CASE("agreement score") {
  using namespace fixture;
  CHECK(agreement_score(p1(), Ensemble({{"p", p1()}})) == 10);

  auto r = top_two();
  StrictRanking ky({t5, t7, t1, t3, t9});
  CHECK(agreement_score(ky, r) == 20 - kt_distance(ky, p2()) - kt_distance(ky, p3()));
  CHECK(agreement_score(ky, r) == oracle::agreement_pairs(ky, r));
  CHECK(agreement_score(ky, r) == oracle::best_agreement(r));
}

TEST_CASE("agreement via preference counts equals the KT route (property)") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 15;
    auto r = oracle::random_ensemble(n, 1 + rng() % 6, rng);
    StrictRanking p(oracle::random_order(n, rng));
    auto w = preference_matrix(r);
    CHECK(w == preference_matrix_serial(r));
    CHECK(w.score(p.order()) == agreement_score(p, r));
    CHECK(agreement_score(p, r) == oracle::agreement_pairs(p, r));
    // p and its reverse split every pair of every entry between them.
    CHECK(agreement_score(p, r) + agreement_score(p.reversed(), r) ==
          r.size() * n * (n - 1) / 2);
  }
}

TEST_CASE("Kemeny-Young on the running example") {
  using namespace fixture;
  const StrictRanking expected({t5, t7, t1, t3, t9});
  auto exact = kemeny_exact(top_two());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    KYParams params{200, 5, seed};
    auto res = kemeny_young_run(top_two(), params);
    CHECK(res.ranking == expected);
    CHECK(res.score == agreement_score(exact, top_two()));
  }
  KYParams none{0, 7, 0};
  CHECK(kemeny_young(top_two(), none) == expected);
}

TEST_CASE("Kemeny-Young with N = 0 returns the flattened mean consensus") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    auto r = oracle::random_ensemble(2 + rng() % 12, 1 + rng() % 5, rng);
    auto res = kemeny_young_run(r, {0, 7, 1});
    CHECK(res.ranking == flatten(mean_consensus(r, MeanOp::Arithmetic)));
    CHECK(res.sweep_scores.empty());
  }
}

TEST_CASE("Kemeny-Young on a single ranking returns it") {
  std::mt19937_64 rng(13);
  StrictRanking p(oracle::random_order(20, rng));
  auto res = kemeny_young_run(Ensemble({{"p", p}}), {200, 7, 3});
  CHECK(res.ranking == p);
  CHECK(res.score == 190);
}

TEST_CASE("Kemeny-Young sweeps never lose agreement (property)") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + rng() % 25;
    auto r = oracle::random_ensemble(n, 2 + rng() % 6, rng);
    KYParams params{static_cast<int>(rng() % 201), static_cast<int>(1 + rng() % 7), rng()};
    auto res = kemeny_young_run(r, params);
    auto prev = res.initial_score;
    for (auto s : res.sweep_scores) {
      CHECK(s >= prev);
      prev = s;
    }
    CHECK(res.score == prev);
    CHECK(agreement_score(res.ranking, r) == res.score);
    CHECK(kemeny_young(r, params) == res.ranking);
  }
}

TEST_CASE("Kemeny-Young reaches the exhaustive optimum when the window spans the suite") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 2 + rng() % 5;
    auto r = oracle::random_ensemble(n, 1 + rng() % 5, rng);
    auto res = kemeny_young_run(r, {200, static_cast<int>(n), rng()});
    CHECK(res.score == oracle::best_agreement(r));
  }
}

TEST_CASE("KY parameters are range-checked") {
  using namespace fixture;
  CHECK_THROWS_AS(kemeny_young(top_two(), {201, 7, 0}), Error);
  CHECK_THROWS_AS(kemeny_young(top_two(), {-1, 7, 0}), Error);
  CHECK_THROWS_AS(kemeny_young(top_two(), {10, 0, 0}), Error);
  CHECK_THROWS_AS(kemeny_young(top_two(), {10, 8, 0}), Error);
}

TEST_CASE("exact Kemeny") {
  using namespace fixture;
  auto opt = kemeny_exact(top_two());
  CHECK(agreement_score(opt, top_two()) ==
        agreement_score(StrictRanking({t5, t7, t1, t3, t9}), top_two()));

  StrictRanking p({2, 0, 1});
  CHECK(kemeny_exact(Ensemble({{"p", p}})) == p);

  Ensemble opposed({{"a", p}, {"b", p.reversed()}});
  std::vector<TestId> order{0, 1, 2};
  do {
    CHECK(agreement_score(StrictRanking(order), opposed) == 3);
  } while (std::next_permutation(order.begin(), order.end()));
  CHECK(kemeny_exact(opposed) == StrictRanking::identity(3));

  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 30; ++trial) {
    auto r = oracle::random_ensemble(1 + rng() % 6, 1 + rng() % 5, rng);
    CHECK(agreement_score(kemeny_exact(r), r) == oracle::best_agreement(r));
  }
  CHECK_THROWS_AS(kemeny_exact(oracle::random_ensemble(9, 2, rng)), Error);
}

TEST_CASE("Borda count") {
  using namespace fixture;
  auto scores = borda_scores(top_two());
  CHECK(scores[t1] == 3);
  CHECK(scores[t3] == 3);
  CHECK(scores[t5] == 6);
  CHECK(scores[t7] == 5);
  CHECK(scores[t9] == 3);
  CHECK(borda(top_two()) == TiedRanking({{t5}, {t7}, {t1, t3, t9}}, 5));

  StrictRanking p({3, 0, 2, 1});
  CHECK(borda(Ensemble({{"p", p}})) == TiedRanking::from_strict(p));
  CHECK(borda(Ensemble({{"p", p}, {"q", p.reversed()}})) == TiedRanking({{0, 1, 2, 3}}, 4));

  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + rng() % 10;
    auto r = oracle::random_ensemble(n, 1 + rng() % 6, rng);
    auto s = borda_scores(r);
    CHECK(std::accumulate(s.begin(), s.end(), std::uint64_t{0}) == r.size() * n * (n - 1) / 2);
    // Unanimity: duplicating one ranking reproduces it.
    Ensemble same({{"a", r[0].ranking}, {"b", r[0].ranking}});
    CHECK(flatten(borda(same)) == r[0].ranking);
  }
}

TEST_CASE("mean-rank consensus") {
  using namespace fixture;
  auto keys = mean_keys(top_two(), MeanOp::Arithmetic);
  CHECK(keys == std::vector<std::uint64_t>{3, 3, 2, 2, 3});
  TiedRanking expected({{t5, t7}, {t1, t3, t9}}, 5);
  CHECK(mean_consensus(top_two(), MeanOp::Arithmetic) == expected);
  // On this fixture Borda and AM group the tests the same way.
  CHECK(flatten(borda(top_two())) == flatten(mean_consensus(top_two(), MeanOp::Arithmetic)));

  StrictRanking p({4, 1, 3, 0, 2});
  for (auto op : {MeanOp::Geometric, MeanOp::Harmonic, MeanOp::Median, MeanOp::Arithmetic}) {
    CHECK(mean_consensus(Ensemble({{"p", p}}), op) == TiedRanking::from_strict(p));
  }

  // Ranks 1 and 4 for test 0; ranks 4 and 1 for test 3.
  Ensemble r({{"a", StrictRanking({0, 1, 2, 3})}, {"b", StrictRanking({3, 1, 2, 0})}});
  CHECK(mean_keys(r, MeanOp::Harmonic)[0] == 1);
  CHECK(mean_keys(r, MeanOp::Arithmetic)[0] == 2);
  CHECK(mean_keys(r, MeanOp::Geometric)[0] == 2);
  CHECK(mean_keys(r, MeanOp::Median)[0] == 2);

  // Median of three ranks.
  Ensemble three({{"a", StrictRanking({0, 1, 2})}, {"b", StrictRanking({1, 2, 0})},
                  {"c", StrictRanking({2, 0, 1})}});
  CHECK(mean_keys(three, MeanOp::Median) == std::vector<std::uint64_t>{2, 2, 2});
}

TEST_CASE("mean keys stay between the smallest and largest rank (property)") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 12;
    auto r = oracle::random_ensemble(n, 1 + rng() % 7, rng);
    for (auto op : {MeanOp::Arithmetic, MeanOp::Geometric, MeanOp::Harmonic, MeanOp::Median}) {
      auto keys = mean_keys(r, op);
      for (TestId t = 0; t < n; ++t) {
        std::size_t lo = n, hi = 1;
        for (const auto& e : r) {
          lo = std::min<std::size_t>(lo, e.ranking.rank(t));
          hi = std::max<std::size_t>(hi, e.ranking.rank(t));
        }
        CHECK(keys[t] >= lo);
        CHECK(keys[t] <= hi);
      }
    }
    auto am = mean_keys(r, MeanOp::Arithmetic);
    auto gm = mean_keys(r, MeanOp::Geometric);
    auto hm = mean_keys(r, MeanOp::Harmonic);
    for (TestId t = 0; t < n; ++t) {
      CHECK(hm[t] <= gm[t]);
      CHECK(gm[t] <= am[t]);
    }
  }
}

TEST_CASE("every method partitions the suite and respects unanimity") {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + rng() % 12;
    auto r = oracle::random_ensemble(n, 1 + rng() % 5, rng);
    StrictRanking p(oracle::random_order(n, rng));
    Ensemble same({{"a", p}, {"b", p}, {"c", p}});
    for (auto m : all_methods()) {
      auto res = run_consensus(r, m, {});
      std::size_t covered = 0;
      for (const auto& g : res.ranking.groups()) covered += g.size();
      CHECK(covered == n);
      CHECK(run_consensus(same, m, {}).ranking == TiedRanking::from_strict(p));
    }
  }
}

TEST_CASE("method labels round-trip") {
  for (auto m : all_methods()) CHECK(parse_method(method_label(m)) == m);
  CHECK_FALSE(parse_method("kemeny").has_value());
  CHECK(all_methods().size() == 6);
}

TEST_CASE("run_consensus reports the flattened agreement") {
  using namespace fixture;
  for (auto m : all_methods()) {
    auto res = run_consensus(top_two(), m, {});
    CHECK(res.agreement == agreement_score(flatten(res.ranking), top_two()));
    CHECK(res.kemeny.has_value() == (m == Method::KemenyYoung));
  }
}
