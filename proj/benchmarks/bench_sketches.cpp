#include <benchmark/benchmark.h>

#include <vector>

#include "splitstream/count_min.hpp"
#include "splitstream/rng.hpp"
#include "splitstream/generator.hpp"
#include "splitstream/sampling.hpp"

namespace {

using namespace splitstream;

void BM_SamplePass(benchmark::State& state) {
  GeneratorSpec gs;
  gs.kind = GeneratorKind::uniform_noise;
  gs.n_obs = state.range(0);
  gs.domain_size = 1000;
  gs.seed = 4;
  const Dataset ds = generate(gs);
  const double p = sampling_probability(64.0, 1000, 0.05, ds.size());
  for (auto _ : state) {
    StreamHandle stream(ds);
    benchmark::DoNotOptimize(sample_pass(stream, p, 11, false));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePass)->Arg(1 << 14)->Arg(1 << 17)->Arg(1 << 20);

void BM_DyadicUpdate(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  std::vector<std::int64_t> xs;
  Rng rng(5);
  for (int i = 0; i < 4096; ++i) xs.push_back(rng.next_int(1, n));
  DyadicCountMin sketch(n, 0.05, 6);
  for (auto _ : state) {
    for (std::int64_t x : xs) sketch.update(x, 1);
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_DyadicUpdate)->Arg(1 << 8)->Arg(1 << 12)->Arg(1 << 16);

void BM_DyadicRangeQuery(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  DyadicCountMin sketch(n, 0.05, 7);
  Rng rng(6);
  for (int i = 0; i < 100000; ++i) sketch.update(rng.next_int(1, n), 1);
  std::vector<std::pair<std::int64_t, std::int64_t>> queries;
  for (int i = 0; i < 512; ++i) {
    const std::int64_t a = rng.next_int(1, n);
    queries.emplace_back(a, rng.next_int(a, n));
  }
  for (auto _ : state) {
    std::int64_t acc = 0;
    for (const auto& [a, b] : queries) acc += sketch.range_estimate(a, b);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 512);
}
BENCHMARK(BM_DyadicRangeQuery)->Arg(1 << 8)->Arg(1 << 12)->Arg(1 << 16);

}  // namespace
