#include <algorithm>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "poolcascade/steiner.hpp"

namespace pc = poolcascade;

namespace {

pc::WeightedDigraph random_digraph(std::size_t n, std::size_t arcs, pc::Rng& rng) {
  pc::WeightedDigraph dg(n);
  std::uniform_int_distribution<pc::NodeId> node(0, static_cast<pc::NodeId>(n) - 1);
  std::uniform_real_distribution<double> weight(1.0, 10.0);
  for (std::size_t i = 1; i < n; ++i) dg.add_arc(node(rng) % static_cast<pc::NodeId>(i), static_cast<pc::NodeId>(i), weight(rng));
  for (std::size_t i = n - 1; i < arcs; ++i) dg.add_arc(node(rng), node(rng), weight(rng));
  return dg;
}

void BM_DirectedSteiner(benchmark::State& state) {
  pc::Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  pc::WeightedDigraph dg = random_digraph(n, 4 * n, rng);
  std::vector<pc::NodeId> terminals;
  std::uniform_int_distribution<pc::NodeId> node(1, static_cast<pc::NodeId>(n) - 1);
  while (terminals.size() < k) {
    pc::NodeId t = node(rng);
    if (std::find(terminals.begin(), terminals.end(), t) == terminals.end()) terminals.push_back(t);
  }
  for (auto _ : state) {
    auto t = pc::directed_steiner_tree(dg, 0, terminals, terminals.size(), 2);
    benchmark::DoNotOptimize(t.weight);
  }
}
BENCHMARK(BM_DirectedSteiner)->Args({500, 8})->Args({2000, 8})->Args({2000, 32})->Unit(benchmark::kMillisecond);

void BM_Dijkstra(benchmark::State& state) {
  pc::Rng rng(5);
  pc::WeightedDigraph dg = random_digraph(static_cast<std::size_t>(state.range(0)), 4 * static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(pc::dijkstra(dg, 0));
}
BENCHMARK(BM_Dijkstra)->Arg(2000)->Arg(20000)->Unit(benchmark::kMicrosecond);

}  // namespace
