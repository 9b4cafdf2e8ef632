#include <benchmark/benchmark.h>

#include "idms/metrics.hpp"
#include "idms/rng.hpp"

using namespace idms;

namespace {

DelayMatrix bench_matrix(int n) {
  Rng rng(12345);
  std::vector<Asn> labels;
  for (int i = 0; i < n; ++i) labels.push_back(static_cast<Asn>(100 + i));
  std::vector<double> entries(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) entries[static_cast<size_t>(i) * n + j] = rng.uniform(1, 300);
  return DelayMatrix(labels, entries);
}

}  // namespace

static void BM_tiv_triples(benchmark::State& state) {
  DelayMatrix m = bench_matrix(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tiv_triples(m, 0.0));
}
BENCHMARK(BM_tiv_triples)->Arg(50)->Arg(100)->Arg(200);

static void BM_tiv_accuracy(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  DelayMatrix ref = bench_matrix(n);
  Rng rng(5);
  std::vector<double> entries = ref.raw_entries();
  for (auto& v : entries)
    if (v != 0.0) v = std::max(0.0, v + rng.uniform(-20, 20));
  DelayMatrix est(ref.labels(), entries);
  for (auto _ : state)
    benchmark::DoNotOptimize(tiv_accuracy(ref, est, 0.0, TivMode::PerTriple));
}
BENCHMARK(BM_tiv_accuracy)->Arg(50)->Arg(100);

static void BM_summarize(benchmark::State& state) {
  Rng rng(7);
  std::vector<double> res;
  for (int i = 0; i < state.range(0); ++i) res.push_back(rng.uniform(0, 2));
  for (auto _ : state) {
    std::vector<double> copy = res;
    benchmark::DoNotOptimize(summarize(std::move(copy)));
  }
}
BENCHMARK(BM_summarize)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
