// OpenMP kernels against their serial reference paths.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "tpagg/consensus.hpp"
#include "tpagg/diversity.hpp"
#include "tpagg/heuristics.hpp"
#include "tpagg/synthetic.hpp"

using namespace tpagg;

namespace {

Ensemble random_ensemble(std::size_t n, std::size_t size) {
  std::mt19937_64 rng(n * 31 + size);
  std::vector<EnsembleEntry> entries;
  std::vector<TestId> order(n);
  std::iota(order.begin(), order.end(), TestId{0});
  for (std::size_t i = 0; i < size; ++i) {
    std::shuffle(order.begin(), order.end(), rng);
    entries.push_back({"r" + std::to_string(i), StrictRanking(order)});
  }
  return Ensemble(std::move(entries));
}

SyntheticScenario scenario(std::size_t tests) {
  SyntheticParams p;
  p.tests = tests;
  p.blocks = tests * 2;
  p.seed = 5;
  return gen_synthetic(p);
}

void BM_KtMatrix(benchmark::State& state) {
  auto e = random_ensemble(static_cast<std::size_t>(state.range(0)), 25);
  for (auto _ : state) benchmark::DoNotOptimize(kt_matrix(e));
}

void BM_KtMatrixSerial(benchmark::State& state) {
  auto e = random_ensemble(static_cast<std::size_t>(state.range(0)), 25);
  for (auto _ : state) benchmark::DoNotOptimize(kt_matrix_serial(e));
}

void BM_PreferenceMatrix(benchmark::State& state) {
  auto e = random_ensemble(static_cast<std::size_t>(state.range(0)), 18);
  for (auto _ : state) benchmark::DoNotOptimize(preference_matrix(e));
}

void BM_PreferenceMatrixSerial(benchmark::State& state) {
  auto e = random_ensemble(static_cast<std::size_t>(state.range(0)), 18);
  for (auto _ : state) benchmark::DoNotOptimize(preference_matrix_serial(e));
}

void BM_BuildEnsemble(benchmark::State& state) {
  auto sc = scenario(static_cast<std::size_t>(state.range(0)));
  auto cfg = EnsembleConfig::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(build_ensemble(sc.snapshot, cfg));
}

void BM_BuildEnsembleSerial(benchmark::State& state) {
  auto sc = scenario(static_cast<std::size_t>(state.range(0)));
  auto cfg = EnsembleConfig::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(build_ensemble_serial(sc.snapshot, cfg));
}

}  // namespace

BENCHMARK(BM_KtMatrix)->Arg(1000)->Arg(10000);
BENCHMARK(BM_KtMatrixSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_PreferenceMatrix)->Arg(500)->Arg(2000);
BENCHMARK(BM_PreferenceMatrixSerial)->Arg(500)->Arg(2000);
BENCHMARK(BM_BuildEnsemble)->Arg(200)->Arg(1000);
BENCHMARK(BM_BuildEnsembleSerial)->Arg(200)->Arg(1000);

BENCHMARK_MAIN();
