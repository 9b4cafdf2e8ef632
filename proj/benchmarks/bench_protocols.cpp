#include <benchmark/benchmark.h>

#include "idms/protocols.hpp"
#include "world.hpp"

using namespace idms;
using namespace idms::testing;

static void BM_udm_construction(benchmark::State& state) {
  int L = static_cast<int>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    TestWorld w = make_world(L, 1, 0);
    state.ResumeTiming();
    benchmark::DoNotOptimize(run_udm_construction(*w.net, *w.overlay, {0, 5}, {}));
  }
}
BENCHMARK(BM_udm_construction)->Arg(20)->Arg(50);

static void BM_udm_broadcast(benchmark::State& state) {
  int sns = static_cast<int>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    TestWorld w = make_world(4, sns, 0);
    DelayMatrix udm = w.net->truth().matrix_at({0, 5});
    state.ResumeTiming();
    benchmark::DoNotOptimize(run_udm_broadcast(*w.net, *w.overlay, udm, nullptr, {}));
  }
}
BENCHMARK(BM_udm_broadcast)->Arg(10)->Arg(50);
