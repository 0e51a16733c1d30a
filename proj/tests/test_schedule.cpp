#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tpagg/metrics.hpp"
#include "tpagg/schedule.hpp"

using namespace tpagg;

namespace {

using Batches = std::vector<std::vector<TestId>>;

TiedRanking am_consensus() {
  using namespace fixture;
  return TiedRanking({{t5, t7}, {t1, t3, t9}}, 5);
}

}  // namespace

TEST_CASE("tie groups become parallel batches") {
  using namespace fixture;
  auto plan = make_plan(am_consensus(), 4);
  CHECK(plan.batches == Batches{{t5, t7}, {t1, t3, t9}});
  CHECK(plan.test_count() == 5);

  CHECK(make_plan(am_consensus(), 2).batches == Batches{{t5, t7}, {t1, t3}, {t9}});
  CHECK(make_plan(am_consensus(), 1).batches.size() == 5);

  auto strict = TiedRanking::from_strict(StrictRanking({3, 1, 0, 2}));
  CHECK(make_plan(strict, 8).batches == Batches{{3}, {1}, {0}, {2}});
  CHECK_THROWS_AS(make_plan(strict, 0), Error);
}

TEST_CASE("simulate the running example") {
  using namespace fixture;
  auto plan = make_plan(am_consensus(), 4);
  std::vector<double> cost{3, 5, 1, 2, 4};  // t1 t3 t5 t7 t9
  auto tl = simulate(plan, cost, failures());
  REQUIRE(tl.events.size() == 2);
  CHECK(tl.events[0].completion_time == 2);
  CHECK(tl.events[0].cumulative_failures == 2);
  CHECK(tl.events[1].completion_time == 7);
  CHECK(tl.events[1].cumulative_failures == 3);
  CHECK(timeline_csv(tl) == "batch,completion_time,cum_failures\n1,2,2\n2,7,3\n");
  CHECK(*apfd_by_batch(plan, failures()) == doctest::Approx(1.0 - 4.0 / 6.0 + 0.25));

  auto quiet = simulate(plan, cost, FailureRecord{});
  for (const auto& ev : quiet.events) CHECK(ev.cumulative_failures == 0);
}

TEST_CASE("sequential plan with unit costs completes at 1..n") {
  auto plan = make_plan(TiedRanking::from_strict(StrictRanking({2, 0, 1, 3})), 3);
  auto tl = simulate(plan, std::vector<double>(4, 1.0), FailureRecord{{1}});
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(tl.events[i].batch == i + 1);
    CHECK(tl.events[i].completion_time == static_cast<double>(i + 1));
  }
  CHECK(tl.events[1].cumulative_failures == 0);
  CHECK(tl.events[2].cumulative_failures == 1);
}

TEST_CASE("parallel plans never finish later than their serialisation (property)") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 20;
    auto order = oracle::random_order(n, rng);
    Batches groups;
    for (std::size_t i = 0; i < n;) {
      std::size_t len = 1 + rng() % (n - i);
      groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                          order.begin() + static_cast<std::ptrdiff_t>(i + len));
      i += len;
    }
    TiedRanking tied(groups, n);
    std::vector<double> cost(n);
    for (auto& c : cost) c = 1.0 + static_cast<double>(rng() % 50);
    auto nproc = 1 + rng() % 6;
    auto plan = make_plan(tied, nproc);
    CHECK(plan.test_count() == n);
    for (const auto& b : plan.batches) {
      CHECK(!b.empty());
      CHECK(b.size() <= nproc);
    }
    auto par = simulate(plan, cost, FailureRecord{});
    auto seq = simulate(make_plan(TiedRanking::from_strict(flatten(tied)), 1), cost,
                        FailureRecord{});
    CHECK(par.events.back().completion_time <= seq.events.back().completion_time);
  }
}

TEST_CASE("simulated time: serial sum versus per-group maximum") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + rng() % 15;
    auto order = oracle::random_order(n, rng);
    Batches groups;
    std::size_t widest = 0;
    for (std::size_t i = 0; i < n;) {
      std::size_t len = 1 + rng() % (n - i);
      groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                          order.begin() + static_cast<std::ptrdiff_t>(i + len));
      widest = std::max(widest, len);
      i += len;
    }
    TiedRanking tied(groups, n);
    std::vector<double> cost(n);
    for (auto& c : cost) c = 1.0 + static_cast<double>(rng() % 9);

    double total = 0;
    for (double c : cost) total += c;
    double by_group = 0;
    for (const auto& g : groups) {
      double worst = 0;
      for (TestId t : g) worst = std::max(worst, cost[t]);
      by_group += worst;
    }
    auto serial = simulate(make_plan(tied, 1), cost, FailureRecord{});
    auto wide = simulate(make_plan(tied, widest), cost, FailureRecord{});
    CHECK(serial.events.back().completion_time == total);
    CHECK(wide.events.back().completion_time == by_group);

    // Earlier groups finish before later groups start.
    auto plan = make_plan(tied, 1 + rng() % 4);
    std::size_t last_group = 0;
    for (const auto& batch : plan.batches) {
      for (TestId t : batch) {
        CHECK(tied.rank(t) >= last_group);
        last_group = tied.rank(t);
      }
    }
  }
}

TEST_CASE("plan JSON round-trip") {
  auto plan = make_plan(am_consensus(), 2);
  auto text = plan_json(plan);
  CHECK(text == R"({"nproc":2,"batches":[[2,3],[0,1],[4]]})");
  auto back = parse_plan_json(text);
  CHECK(back.nproc == 2);
  CHECK(back.batches == plan.batches);
  CHECK_THROWS_AS(parse_plan_json(R"({"nproc":1,"batches":[[0,1]]})"), Error);
  CHECK_THROWS_AS(parse_plan_json("{"), Error);
}
