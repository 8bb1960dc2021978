#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "poolcascade/cost.hpp"
#include "poolcascade/errors.hpp"
#include "poolcascade/one_hop.hpp"
#include "poolcascade/reconstruct.hpp"

namespace pc = poolcascade;

namespace {

struct Instance {
  pc::Graph graph;
  pc::CostModel costs;
  pc::PoolSet pools;
  pc::Observation obs;
  pc::NodeId root = 0;
};

Instance make_instance(std::size_t n, double p, double ratio, std::size_t size, std::uint64_t seed) {
  pc::Rng rng(seed);
  Instance inst;
  inst.graph = pc::generate_ba(n, 3, rng);
  inst.graph.set_homogeneous_probability(p);
  inst.costs = pc::compute_costs(inst.graph);
  std::vector<pc::NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0);
  // Keep drawing until the cascade reaches a few pools.
  for (;;) {
    inst.root = std::uniform_int_distribution<pc::NodeId>(0, static_cast<pc::NodeId>(n) - 1)(rng);
    pc::Cascade truth = pc::simulate_single_seed(inst.graph, inst.root, rng);
    inst.pools = pc::design_random_pools(nodes, ratio, size, rng);
    inst.obs = pc::evaluate_pools(inst.pools, truth.infected());
    if (inst.obs.num_positive() >= 4) return inst;
  }
}

void BM_ApproxCascade(benchmark::State& state) {
  Instance inst = make_instance(static_cast<std::size_t>(state.range(0)), 0.05, 0.5, 5, 11);
  for (auto _ : state) {
    auto r = pc::approx_cascade(inst.graph, inst.costs, inst.root, inst.pools, inst.obs);
    benchmark::DoNotOptimize(r.cost.total);
  }
  state.counters["positive_pools"] = static_cast<double>(inst.obs.num_positive());
}
BENCHMARK(BM_ApproxCascade)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BaselineAll(benchmark::State& state) {
  Instance inst = make_instance(1000, 0.05, 0.5, 5, 11);
  for (auto _ : state) {
    try {
      auto r = pc::baseline_all(inst.graph, inst.costs, inst.root, inst.pools, inst.obs);
      benchmark::DoNotOptimize(r.cost.total);
    } catch (const pc::InfeasibleError&) {
    }
  }
}
BENCHMARK(BM_BaselineAll)->Unit(benchmark::kMillisecond);

void BM_RoundCascade(benchmark::State& state) {
  pc::Rng rng(7);
  pc::Graph g = pc::generate_ba(static_cast<std::size_t>(state.range(0)), 3, rng);
  g.set_homogeneous_probability(0.1);
  pc::BipartiteExpansion bip = pc::time_expand(g);
  pc::CostModel cm = pc::compute_one_hop_costs(bip, 0.05);
  pc::Cascade truth = pc::simulate_one_hop(bip, 0.05, rng);
  std::vector<pc::NodeId> targets;
  for (std::size_t u = 0; u < g.num_nodes(); ++u) targets.push_back(bip.target_copy(static_cast<pc::NodeId>(u)));
  pc::PoolSet ps = pc::design_random_pools(targets, 0.5, 5, rng);
  pc::Observation obs = pc::evaluate_pools(ps, truth.infected());
  for (auto _ : state) {
    auto r = pc::reconstruct_one_hop(bip, cm, ps, obs, rng);
    benchmark::DoNotOptimize(r.cost);
  }
  state.counters["positive_pools"] = static_cast<double>(obs.num_positive());
}
BENCHMARK(BM_RoundCascade)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace
