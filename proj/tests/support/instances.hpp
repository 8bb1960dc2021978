#pragma once

#include <span>
#include <vector>

#include "poolcascade/cascade.hpp"
#include "poolcascade/graph.hpp"
#include "poolcascade/pooling.hpp"
#include "poolcascade/simulate.hpp"
#include "poolcascade/steiner.hpp"

namespace pctest {

using poolcascade::Rng;

struct PoolInstance {
  poolcascade::Graph graph;
  poolcascade::CostModel costs;
  poolcascade::PoolSet pools;
  poolcascade::Observation obs;
  poolcascade::NodeId root = 0;
  poolcascade::Cascade truth;
};

struct OneHopInstance {
  poolcascade::Graph graph;
  poolcascade::BipartiteExpansion bip;
  poolcascade::CostModel costs;
  poolcascade::PoolSet pools;
  poolcascade::Observation obs;
  poolcascade::Cascade truth;
  double p0 = 0.0;
};

/// Connected graph: random spanning tree plus each other pair with `extra`.
poolcascade::Graph random_connected_graph(std::size_t n, double extra, Rng& rng);

/// Assigns every edge a probability drawn uniformly from [lo, hi].
void randomize_probabilities(poolcascade::Graph& g, double lo, double hi, Rng& rng);

/// Simulated single-seed cascade on `g` (probabilities set), pooled and
/// tested without noise.
PoolInstance pool_instance_from(poolcascade::Graph g, double ratio, std::size_t pool_size, Rng& rng);

/// Graph with n in [n_min, n_max] (BA or G(n,q) or tree-plus-chords), one
/// homogeneous probability from `probs`, pools from the given choices.
PoolInstance random_pool_instance(Rng& rng, std::size_t n_min, std::size_t n_max, std::span<const double> probs,
                                  std::span<const double> ratios, std::span<const std::size_t> sizes);

/// Small instance for exact comparisons: connected graph on n <= n_max nodes,
/// heterogeneous p in [0.05, 0.45], pools of size 1..3.
PoolInstance small_pool_instance(Rng& rng, std::size_t n_max = 10);

/// Time-expanded random connected graph on n nodes, simulated one-hop
/// cascade, pools over target copies.
OneHopInstance random_one_hop_instance(Rng& rng, std::size_t n, double p_lo, double p_hi, double p0, double ratio,
                                       std::size_t pool_size);

/// Exactly k positive pools, each holding one infected target plus filler;
/// negative pools drawn from the uninfected targets.
OneHopInstance one_hop_instance_with_k_positive(Rng& rng, std::size_t n, std::size_t k, std::size_t pool_size,
                                                double p, double p0);

/// Random digraph with `arcs` arcs and integer-ish weights in [1, 10].
poolcascade::WeightedDigraph random_digraph(std::size_t n, std::size_t arcs, Rng& rng);

/// Ten-node worked example (nodes 0..9, r = 0) with homogeneous p.
poolcascade::Graph worked_example_graph(double p);
poolcascade::PoolSet worked_example_pools();
/// Reference tree: 0-1, 1-5, 1-2, 2-3, 0-4, 4-9.
poolcascade::Cascade worked_example_tree();

}  // namespace pctest
