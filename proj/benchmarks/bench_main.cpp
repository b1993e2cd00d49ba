// Microbenchmarks for the hot kernels: log-domain power iteration and
// Karp's maximum mean cycle, on the full shift over 3 letters.

#include <benchmark/benchmark.h>

#include "effpot/transfer.hpp"
#include "effpot/transship.hpp"

namespace {

effpot::SubshiftSpec full_shift(int r) {
  std::vector<std::vector<int>> m(r, std::vector<int>(r, 1));
  return effpot::build_sft(r, m, 0.5);
}

void BM_Pressure(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  effpot::SubshiftSpec spec = full_shift(3);
  effpot::WordTable words = effpot::enumerate_words(spec, depth);
  effpot::XPotential psi{depth, std::vector<double>(words.size())};
  for (std::size_t i = 0; i < words.size(); ++i)
    psi.values[i] = 0.1 * static_cast<double>(i % 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(effpot::pressure(spec, psi).pressure);
}
BENCHMARK(BM_Pressure)->Arg(2)->Arg(4)->Arg(6);

void BM_KarpMaxMeanCycle(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  effpot::SubshiftSpec spec = full_shift(3);
  effpot::BlockGraph g = effpot::block_graph(spec, depth);
  std::vector<double> w(g.nodes.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = static_cast<double>((i * 13) % 11);
  effpot::WeightedDigraph dg = effpot::node_weight_digraph(g, w);
  for (auto _ : state)
    benchmark::DoNotOptimize(effpot::karp_max_mean_cycle(dg).value);
}
BENCHMARK(BM_KarpMaxMeanCycle)->Arg(2)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
