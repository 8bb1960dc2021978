#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "poolcascade/cascade.hpp"
#include "poolcascade/graph.hpp"
#include "poolcascade/one_hop.hpp"
#include "poolcascade/pooling.hpp"
#include "poolcascade/simulate.hpp"

namespace poolcascade {

struct OracleResult {
  Cascade optimal_cascade;
  double optimal_cost = 0.0;
  std::size_t instances_enumerated = 0;
};

/// Calls `visit` with the edge indices of every spanning tree of the graph on
/// `num_nodes` nodes with the given edge list. Returns the number of trees.
std::size_t for_each_spanning_tree(std::size_t num_nodes, std::span<const std::pair<int, int>> edges,
                                   const std::function<void(std::span<const int>)>& visit);

/// Exact single-seed MLE: every connected node subset containing the root and
/// avoiding S_0, every spanning tree of each, approximate cost (chords pay d_e).
OracleResult brute_force_pool_mle(const Graph& g, const CostModel& cm, NodeId root, const PoolSet& ps,
                                  const Observation& obs, std::size_t n_cap = 12);

/// Exact one-hop MLE over (seed set, live arc set) pairs.
OracleResult brute_force_one_hop_mle(const BipartiteExpansion& bip, const CostModel& cm, const PoolSet& ps,
                                     const Observation& obs, std::size_t log2_budget = 20);

/// Optimum of the 0/1 program behind OneHopLp, including the constant.
double brute_force_one_hop_ilp(const OneHopLp& lp, std::size_t log2_budget = 20);

enum class LimitationKind { pooled_leaves, noisy_spider };

struct LimitationParams {
  /// pooled_leaves: number of infected leaves (>= 2). noisy_spider: path length (>= 3).
  std::size_t k = 4;
  /// Homogeneous probability for pooled_leaves, spider spoke edges for noisy_spider.
  double prob = 0.2;
  /// Path edges of noisy_spider.
  double path_prob = 0.2;
};

struct LimitationInstance {
  Graph graph;
  CostModel costs;
  PoolSet pools;
  Cascade ground_truth;
  NodeId root = 0;
  /// noisy_spider only.
  NodeId central = -1;
  std::vector<NodeId> path_nodes;   // v_1..v_k
  std::vector<NodeId> spoke_nodes;  // all w_ij
};

/// pooled_leaves: root - hub - {leaves} is the ground truth; a two-edge path
/// from the root reaches a decoy placed in the same pool as the leaves.
/// noisy_spider: path v_1..v_k (ground truth, rooted at v_1), central node u
/// joined to each v_i by an induced path of k spoke nodes; pools {v_i, w_ik}.
LimitationInstance make_limitation_instance(LimitationKind kind, const LimitationParams& params = {});

/// Probability that P_1 and P_k stay positive while some middle pool flips
/// to negative under false-negative rate q_fn.
double spider_bad_event_probability(std::size_t k, double q_fn);

}  // namespace poolcascade
