#include "tpagg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "tpagg/io.hpp"

namespace tpagg {

namespace {

// mt19937_64's output sequence is fixed by the standard; the distributions
// are not, so the few we need are spelled out here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

bool in_open_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

void SyntheticParams::validate() const {
  if (tests < 2) throw Error(ErrorKind::InvalidParams, "need at least two tests");
  if (blocks < 1) throw Error(ErrorKind::InvalidParams, "need at least one block");
  if (!in_open_unit(delta_frac)) throw Error(ErrorKind::InvalidParams, "delta_frac outside (0,1)");
  if (!in_open_unit(fail_frac)) throw Error(ErrorKind::InvalidParams, "fail_frac outside (0,1)");
  if (!(imbalance >= 0.0) || !std::isfinite(imbalance)) {
    throw Error(ErrorKind::InvalidParams, "imbalance must be >= 0");
  }
  if (!(correlation >= 0.0 && correlation <= 1.0)) {
    throw Error(ErrorKind::InvalidParams, "correlation outside [0,1]");
  }
}

SyntheticScenario gen_synthetic(const SyntheticParams& params) {
  params.validate();
  Rng rng(params.seed);
  const std::size_t n = params.tests;
  const std::size_t blocks = params.blocks;

  SyntheticScenario sc;
  auto& s = sc.snapshot;
  s.n = n;
  s.names = NameTable::numeric(n);

  std::vector<BlockId> all(blocks);
  std::iota(all.begin(), all.end(), BlockId{0});
  {
    auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(params.delta_frac * static_cast<double>(blocks))));
    auto pool = all;
    rng.shuffle(pool);
    s.delta.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(s.delta.begin(), s.delta.end());
  }

  std::vector<std::uint64_t> instructions(blocks);
  for (auto& w : instructions) w = 1 + rng.below(20);

  const std::size_t max_cov = std::max<std::size_t>(1, blocks / 4);
  s.coverage.resize(n);
  s.cost.resize(n);
  std::vector<Trace> traces(n);
  for (std::size_t t = 0; t < n; ++t) {
    auto size = 1 + rng.below(max_cov);
    auto pool = all;
    rng.shuffle(pool);
    std::vector<BlockId> visit(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));

    // Raw path: the visit order with occasional loops back to earlier blocks.
    Trace& path = traces[t];
    for (std::size_t i = 0; i < visit.size(); ++i) {
      path.push_back({visit[i], instructions[visit[i]]});
      if (i > 0 && rng.unit() < 0.3) {
        auto back = visit[rng.below(i)];
        path.push_back({back, instructions[back]});
      }
    }
    std::sort(visit.begin(), visit.end());
    s.coverage[t] = std::move(visit);

    double spread = std::pow(10.0, params.imbalance * rng.unit());
    s.cost[t] = std::max(1.0, std::round(100.0 * spread));
  }
  s.traces = std::move(traces);

  // Failing tests: highest mix of Δ-relevance and noise.
  std::vector<double> weight(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t hits = 0;
    for (BlockId b : s.coverage[t]) {
      hits += std::binary_search(s.delta.begin(), s.delta.end(), b) ? 1 : 0;
    }
    double rel = static_cast<double>(hits) / static_cast<double>(s.delta.size());
    weight[t] = params.correlation * rel + (1.0 - params.correlation) * rng.unit();
  }
  const auto fail_count =
      static_cast<std::size_t>(std::llround(params.fail_frac * static_cast<double>(n)));
  std::vector<TestId> by_weight(n);
  std::iota(by_weight.begin(), by_weight.end(), TestId{0});
  std::stable_sort(by_weight.begin(), by_weight.end(),
                   [&](TestId a, TestId b) { return weight[a] > weight[b]; });
  sc.failures.failed.assign(by_weight.begin(),
                            by_weight.begin() + static_cast<std::ptrdiff_t>(fail_count));
  std::sort(sc.failures.failed.begin(), sc.failures.failed.end());

  s.validate();
  return sc;
}

void write_scenario(const SyntheticScenario& sc, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto emit = [&](const char* name, auto&& fn) {
    std::ostringstream out;
    fn(out);
    write_file(dir / name, out.str());
  };
  emit("coverage.csv", [&](std::ostream& o) { write_coverage(o, sc.snapshot); });
  emit("delta.txt", [&](std::ostream& o) { write_delta(o, sc.snapshot); });
  emit("cost.csv", [&](std::ostream& o) { write_cost(o, sc.snapshot); });
  emit("traces.jsonl", [&](std::ostream& o) { write_traces(o, sc.snapshot); });
  emit("failures.txt",
       [&](std::ostream& o) { write_failures(o, sc.failures, sc.snapshot.names); });
}

}  // namespace tpagg
