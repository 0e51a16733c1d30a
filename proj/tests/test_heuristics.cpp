#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "tpagg/heuristics.hpp"
#include "tpagg/synthetic.hpp"

using namespace tpagg;

namespace {

SuiteSnapshot snapshot(std::vector<std::vector<BlockId>> cov, std::vector<BlockId> delta,
                       std::vector<double> cost = {}) {
  SuiteSnapshot s;
  s.n = cov.size();
  s.coverage = std::move(cov);
  s.delta = std::move(delta);
  s.cost = cost.empty() ? std::vector<double>(s.n, 1.0) : std::move(cost);
  s.names = NameTable::numeric(s.n);
  s.validate();
  return s;
}

Trace path_of(std::vector<BlockId> blocks, std::uint64_t instr = 1) {
  Trace t;
  for (auto b : blocks) t.push_back({b, instr});
  return t;
}

}  // namespace

TEST_CASE("rel: share of delta covered") {
  auto s = snapshot({{1, 2}, {1}}, {1, 2});
  auto rel = relevance_scores(s);
  CHECK(rel[0] == 1.0);
  CHECK(rel[1] == 0.5);
  CHECK(prioritize_rel(s) == StrictRanking({0, 1}));

  CHECK(prioritize_rel(snapshot({{1}, {1}, {1}}, {1})) == StrictRanking({0, 1, 2}));
  CHECK(prioritize_rel(snapshot({{5}, {1}, {1, 5}}, {1})) == StrictRanking({1, 2, 0}));
}

TEST_CASE("con: smaller non-delta footprint first") {
  auto s = snapshot({{1}, {1, 9}}, {1});
  auto con = confinedness_scores(s);
  CHECK(con[0] == 1.0);
  CHECK(con[1] == 0.5);
  CHECK(prioritize_con(s) == StrictRanking({0, 1}));
  CHECK(prioritize_con(snapshot({{1}, {1, 2}, {2}}, {1, 2})) == StrictRanking({0, 1, 2}));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<BlockId>> cov(6);
    for (auto& c : cov) {
      std::set<BlockId> blocks;
      auto k = rng() % 8;
      for (std::size_t i = 0; i < k; ++i) blocks.insert(rng() % 12);
      c.assign(blocks.begin(), blocks.end());
    }
    auto s2 = snapshot(cov, {0, 1, 2});
    auto r = prioritize_con(s2);
    auto outside = [&](TestId t) {
      std::size_t o = 0;
      for (auto b : s2.coverage[t]) o += b > 2 ? 1 : 0;
      return o;
    };
    for (TestId a = 0; a < 6; ++a) {
      for (TestId b = 0; b < 6; ++b) {
        if (outside(a) > outside(b)) CHECK(r.rank(a) > r.rank(b));
      }
    }
  }
}

TEST_CASE("relcon blends the two scores") {
  // rel = (1.0, 0.5), con = (0.5, 1.0)
  auto s = snapshot({{1, 2, 9}, {1}}, {1, 2});
  CHECK(relevance_scores(s) == std::vector<double>{1.0, 0.5});
  CHECK(confinedness_scores(s) == std::vector<double>{0.5, 1.0});
  CHECK(prioritize_relcon(s, 0.9) == StrictRanking({0, 1}));
  CHECK(prioritize_relcon(s, 0.1) == StrictRanking({1, 0}));
  CHECK(prioritize(s, "relcon_90_10") == StrictRanking({0, 1}));

  // rel tied: relcon_50_50 follows con
  auto tied = snapshot({{1, 7, 8}, {1, 7}, {1}}, {1});
  CHECK(prioritize_relcon(tied, 0.5) == prioritize_con(tied));
  CHECK_THROWS_AS(prioritize_relcon(tied, 1.5), Error);
}

TEST_CASE("cost: cheapest first") {
  CHECK(prioritize_cost(snapshot({{}, {}, {}}, {1}, {5, 3, 9})) == StrictRanking({1, 0, 2}));
  CHECK(prioritize_cost(snapshot({{}, {}, {}}, {1}, {2, 2, 2})) == StrictRanking({0, 1, 2}));
  CHECK(prioritize_cost(snapshot({{}, {}, {}}, {1}, {1e9, 2, 3})).order().back() == 0);
}

TEST_CASE("ga: greedy additional with reset") {
  CHECK(prioritize_ga(snapshot({{1, 2}, {2, 3}, {3}}, {1, 2, 3})) == StrictRanking({0, 1, 2}));
  CHECK(prioritize_ga(snapshot({{1}}, {1})) == StrictRanking({0}));
  CHECK(prioritize_ga(snapshot({{4, 1}, {1, 4}}, {1, 4})) == StrictRanking({0, 1}));
  // Tests without delta coverage trail in id order.
  CHECK(prioritize_ga(snapshot({{9}, {1}, {8}}, {1})) == StrictRanking({1, 0, 2}));
}

TEST_CASE("costga: gain per unit cost") {
  // t0: 2 new blocks at cost 10 (0.2); t1: 1 new block at cost 2 (0.5)
  auto s = snapshot({{1, 2}, {3}}, {1, 2, 3}, {10, 2});
  CHECK(prioritize_costga(s).order().front() == 1);

  // After t0 covers everything the keys are recomputed over the full delta:
  // t1 = 1/2, t2 = 2/3, so t2 beats the cheaper t1.
  auto reset = snapshot({{1, 2}, {1}, {1, 2}}, {1, 2}, {1, 2, 3});
  CHECK(prioritize_costga(reset) == StrictRanking({0, 2, 1}));

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<BlockId>> cov(7);
    for (auto& c : cov) {
      std::set<BlockId> blocks;
      auto k = rng() % 5;
      for (std::size_t i = 0; i < k; ++i) blocks.insert(rng() % 10);
      c.assign(blocks.begin(), blocks.end());
    }
    auto uniform = snapshot(cov, {0, 2, 4, 6}, std::vector<double>(7, 3.5));
    CHECK(prioritize_costga(uniform) == prioritize_ga(uniform));
  }
}

TEST_CASE("linearize keeps first visits") {
  CHECK(linearize_trace(path_of({1, 2, 1, 3, 2})) == path_of({1, 2, 3}));
  CHECK(linearize_trace(path_of({4, 5, 6})) == path_of({4, 5, 6}));
  CHECK(linearize_trace(path_of({7, 7, 7})) == path_of({7}));
  CHECK_THROWS_AS(linearize_trace({}), Error);
}

TEST_CASE("displacement along a path") {
  // [a, d1, b, d2, c] with d1 = 10, d2 = 20
  std::vector<BlockId> delta{10, 20};
  auto p = displacement(path_of({1, 10, 2, 20, 3}), delta, false);
  REQUIRE(p.has_value());
  CHECK(p->alpha == 1);
  CHECK(p->beta == 2);
  CHECK(p->gamma == 1);
  CHECK(displacement_score(*p) == 4);

  auto single = displacement(path_of({10}), delta, false);
  REQUIRE(single.has_value());
  CHECK(displacement_score(*single) == 0);

  CHECK_FALSE(displacement(path_of({1, 2}), delta, false).has_value());

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BlockId> blocks(1 + rng() % 10);
    std::iota(blocks.begin(), blocks.end(), BlockId{0});
    std::shuffle(blocks.begin(), blocks.end(), rng);
    std::vector<BlockId> d{0, 3, 5};
    auto uw = displacement(path_of(blocks), d, false);
    auto w = displacement(path_of(blocks, 1), d, true);
    REQUIRE(uw.has_value() == w.has_value());
    if (uw) CHECK(displacement_score(*uw) == displacement_score(*w));
  }
}

TEST_CASE("colosseum orders by displacement, delta-free tests last") {
  auto s = snapshot({{1, 2, 3}, {2, 3, 4}, {5}}, {2});
  s.traces = std::vector<Trace>{path_of({1, 3, 2}), path_of({2, 3, 4}), path_of({5})};
  // t0: alpha 2, gamma 0 -> 2; t1: alpha 0, gamma 2 -> 2; t2 touches nothing.
  CHECK(prioritize_colosseum(s, false) == StrictRanking({0, 1, 2}));

  // Weighted: instructions make t1's tail expensive.
  s.traces = std::vector<Trace>{path_of({1, 3, 2}), {{2, 50}, {3, 1}, {4, 1}}, path_of({5})};
  CHECK(prioritize_colosseum(s, true) == StrictRanking({0, 1, 2}));
  s.traces = std::vector<Trace>{{{1, 9}, {3, 9}, {2, 1}}, path_of({2, 3, 4}), path_of({5})};
  CHECK(prioritize_colosseum(s, true) == StrictRanking({1, 0, 2}));

  s.traces.reset();
  CHECK_THROWS_AS(prioritize_colosseum(s, false), Error);
}

TEST_CASE("default ensemble: 25 entries over 16 strategies") {
  auto cfg = EnsembleConfig::defaults();
  CHECK(cfg.total() == 25);
  CHECK(cfg.items.size() == 16);
  CHECK(cfg.uses_traces());

  SyntheticParams params;
  params.tests = 30;
  params.seed = 4;
  auto sc = gen_synthetic(params);
  auto e = build_ensemble(sc.snapshot, cfg);
  CHECK(e.size() == 25);
  std::set<std::string> labels;
  for (const auto& entry : e) labels.insert(entry.label);
  CHECK(labels.size() == 16);

  std::istringstream no_col(
      "rel,1\ncon,1\ncost,4\nga,1\ncostga,1\n"
      "relcon_10_90\nrelcon_20_80\nrelcon_30_70\nrelcon_40_60\nrelcon_50_50\n"
      "relcon_60_40\nrelcon_70_30\nrelcon_80_20\nrelcon_90_10\n");
  auto cfg17 = EnsembleConfig::parse(no_col);
  CHECK(cfg17.total() == 17);
  CHECK_FALSE(cfg17.uses_traces());
  auto without_traces = sc.snapshot;
  without_traces.traces.reset();
  CHECK(build_ensemble(without_traces, cfg17).size() == 17);
  CHECK_THROWS_AS(build_ensemble(without_traces, cfg), Error);

  EnsembleConfig ones;
  for (const auto& label : standalone_labels()) ones.items.push_back({label, 1});
  CHECK(build_ensemble(sc.snapshot, ones).size() == 16);
}

TEST_CASE("ensemble config rejects unknown strategies and bad multiplicities") {
  std::istringstream unknown("rel,1\nfoo,2\n");
  CHECK_THROWS_AS(EnsembleConfig::parse(unknown), Error);
  std::istringstream zero("rel,0\n");
  CHECK_THROWS_AS(EnsembleConfig::parse(zero), Error);
  std::istringstream junk("rel,x\n");
  CHECK_THROWS_AS(EnsembleConfig::parse(junk), Error);
}

TEST_CASE("ensemble construction is deterministic and matches the serial path") {
  SyntheticParams params;
  params.tests = 60;
  params.seed = 21;
  auto sc = gen_synthetic(params);
  auto cfg = EnsembleConfig::defaults();
  auto a = build_ensemble(sc.snapshot, cfg);
  auto b = build_ensemble(sc.snapshot, cfg);
  auto c = build_ensemble_serial(sc.snapshot, cfg);
  REQUIRE(a.size() == c.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].label == c[i].label);
    CHECK(a[i].ranking == b[i].ranking);
    CHECK(a[i].ranking == c[i].ranking);
  }
}
