#include <benchmark/benchmark.h>

#include "splitstream/generator.hpp"
#include "splitstream/oracle.hpp"

namespace {

using namespace splitstream;

void BM_OracleRegression(benchmark::State& state) {
  GeneratorSpec gs;
  gs.kind = GeneratorKind::piecewise_step;
  gs.n_obs = state.range(0);
  gs.domain_size = 2000;
  gs.noise = 0.3;
  gs.seed = 8;
  const Dataset ds = generate(gs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_regression(ds));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OracleRegression)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_OracleCategorical(benchmark::State& state) {
  GeneratorSpec gs;
  gs.kind = GeneratorKind::two_cluster;
  gs.n_obs = 1 << 15;
  gs.domain_size = state.range(0);
  gs.noise = 0.2;
  gs.seed = 9;
  gs.mode = Mode::categorical;
  const Dataset ds = generate(gs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_categorical(ds));
  }
}
// Cost doubles per extra category: the Gray-code walk visits 2^(N-1) masks.
BENCHMARK(BM_OracleCategorical)->Arg(8)->Arg(14)->Arg(20);

void BM_LossCurve(benchmark::State& state) {
  GeneratorSpec gs;
  gs.kind = GeneratorKind::piecewise_step;
  gs.n_obs = 1 << 16;
  gs.domain_size = state.range(0);
  gs.noise = 0.3;
  gs.seed = 10;
  const Dataset ds = generate(gs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss_curve(ds));
  }
}
BENCHMARK(BM_LossCurve)->Arg(256)->Arg(4096)->Arg(65536);

}  // namespace
