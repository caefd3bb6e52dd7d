#include <benchmark/benchmark.h>

#include <random>

#include "fcmac/channels.hpp"
#include "fcmac/feasibility.hpp"
#include "fcmac/graph.hpp"
#include "fcmac/schemes.hpp"

using namespace fcmac;

namespace {

CharGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (coin(rng)) edges.emplace_back(a, b);
    }
  }
  return CharGraph(Alphabet::integers("v", 0, int(n) - 1), edges);
}

void BM_ExactColoring(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const auto g = random_graph(n, 0.4, 3);
  std::mt19937_64 rng(4);
  std::vector<double> w(n);
  for (auto& x : w) x = std::uniform_real_distribution<>(0.1, 1.0)(rng);
  const auto m = JointPMF::from_weights({g.vertices()}, [&](auto i) { return w[i[0]]; });
  for (auto _ : state) benchmark::DoNotOptimize(min_entropy_coloring(g, m).entropy_bits);
}
BENCHMARK(BM_ExactColoring)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

void BM_ChromaticEntropyN2(benchmark::State& state) {
  const auto joint = section5_joint();
  const auto g = characteristic_graph(joint, section5_function());
  for (auto _ : state) benchmark::DoNotOptimize(conditional_chromatic_entropy(g, joint, 2).bits_per_symbol);
}
BENCHMARK(BM_ChromaticEntropyN2)->Unit(benchmark::kMillisecond);

void BM_GraphEntropy(benchmark::State& state) {
  const auto joint = section5_joint();
  const auto g = characteristic_graph(joint, section5_function());
  for (auto _ : state) benchmark::DoNotOptimize(conditional_graph_entropy(g, joint).bits);
}
BENCHMARK(BM_GraphEntropy)->Unit(benchmark::kMillisecond);

void BM_AdderCapacity(benchmark::State& state) {
  const auto mac = adder_mac();
  for (auto _ : state) benchmark::DoNotOptimize(mac_sum_capacity_independent(mac).bits);
}
BENCHMARK(BM_AdderCapacity)->Unit(benchmark::kMicrosecond);

void BM_MonteCarloAf(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_af(5.0, 0.5, 1.0, std::size_t(state.range(0)), 1).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloAf)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_FeasibilityCheck(benchmark::State& state) {
  const auto joint = section5_joint();
  const auto f = section5_function();
  const auto c = Labeling::from_coloring(
      min_entropy_coloring(characteristic_graph(joint, f), marginalize(joint, {"u1"})).coloring);
  const auto spec = build_labeled_system(joint, f, c, c, ChannelInputs::complement(), adder_mac(),
                                         DistortionTable::hamming({"0", "1"}), 1.0 / 6.0);
  for (auto _ : state) benchmark::DoNotOptimize(check_feasibility(spec).achieved_distortion);
}
BENCHMARK(BM_FeasibilityCheck)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
