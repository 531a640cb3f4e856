#include <benchmark/benchmark.h>

#include "splitstream/cls_stream.hpp"
#include "splitstream/generator.hpp"
#include "splitstream/reg_stream.hpp"

namespace {

using namespace splitstream;

Dataset make_regression(std::int64_t m, std::int64_t n) {
  GeneratorSpec gs;
  gs.kind = GeneratorKind::piecewise_step;
  gs.n_obs = m;
  gs.domain_size = n;
  gs.label_max = 1.0;
  gs.noise = 0.3;
  gs.seed = 1;
  return generate(gs);
}

Dataset make_classification(std::int64_t m, std::int64_t n) {
  GeneratorSpec gs;
  gs.kind = GeneratorKind::two_cluster;
  gs.n_obs = m;
  gs.domain_size = n;
  gs.noise = 0.2;
  gs.seed = 2;
  return generate(gs);
}

void BM_ExactRegression1Pass(benchmark::State& state) {
  const Dataset ds = make_regression(state.range(0), 1000);
  for (auto _ : state) {
    StreamHandle stream(ds);
    benchmark::DoNotOptimize(exact_split_1pass(stream));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExactRegression1Pass)->Arg(1 << 12)->Arg(1 << 15)->Arg(1 << 18);

void BM_AdditiveRegression2Pass(benchmark::State& state) {
  const Dataset ds = make_regression(state.range(0), 1000);
  for (auto _ : state) {
    StreamHandle stream(ds);
    benchmark::DoNotOptimize(additive_split_2pass(stream, 0.05, 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AdditiveRegression2Pass)->Arg(1 << 12)->Arg(1 << 15)->Arg(1 << 18);

void BM_MultiplicativeRegression(benchmark::State& state) {
  const Dataset ds = make_regression(1 << 14, state.range(0));
  for (auto _ : state) {
    StreamHandle stream(ds);
    benchmark::DoNotOptimize(multiplicative_split(stream, 0.25));
  }
}
BENCHMARK(BM_MultiplicativeRegression)->Arg(64)->Arg(512)->Arg(4096);

void BM_MultiplicativeLowpass(benchmark::State& state) {
  const Dataset ds = make_regression(1 << 14, 4096);
  const double beta = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    StreamHandle stream(ds);
    benchmark::DoNotOptimize(multiplicative_split_lowpass(stream, 0.25, beta));
  }
}
BENCHMARK(BM_MultiplicativeLowpass)->Arg(1)->Arg(2)->Arg(4);

void BM_AdditiveClassification1Pass(benchmark::State& state) {
  const Dataset ds = make_classification(state.range(0), 1000);
  for (auto _ : state) {
    StreamHandle stream(ds);
    benchmark::DoNotOptimize(additive_cls_split_1pass(stream, 0.1, 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AdditiveClassification1Pass)->Arg(1 << 12)->Arg(1 << 15)->Arg(1 << 18);

void BM_CategoricalAdditive(benchmark::State& state) {
  GeneratorSpec gs;
  gs.kind = GeneratorKind::two_cluster;
  gs.n_obs = 1 << 15;
  gs.domain_size = state.range(0);
  gs.noise = 0.2;
  gs.seed = 3;
  gs.mode = Mode::categorical;
  const Dataset ds = generate(gs);
  for (auto _ : state) {
    StreamHandle stream(ds);
    benchmark::DoNotOptimize(categorical_additive(stream, 0.1, 7));
  }
}
BENCHMARK(BM_CategoricalAdditive)->Arg(8)->Arg(12)->Arg(16);

}  // namespace
