#pragma once

#include <string>
#include <vector>

#include "poolcascade/cascade.hpp"
#include "poolcascade/graph.hpp"
#include "poolcascade/simulate.hpp"

namespace poolcascade {

/// Non-tree edges incident to a single-seed tree, split three ways.
struct BoundarySets {
  std::vector<EdgeId> to_negative;  // other endpoint in S_0
  std::vector<EdgeId> outgoing;     // other endpoint outside the tree and outside S_0
  std::vector<EdgeId> chords;       // both endpoints in the tree, edge not in the tree
};

struct CostBreakdown {
  double inclusion = 0.0;
  double boundary_s0 = 0.0;
  double boundary_out = 0.0;
  double chord = 0.0;
  double total = 0.0;

  static std::string csv_header();
  std::string csv_row() const;
};

struct OneHopCostBreakdown {
  double seed_cost = 0.0;
  double nonseed_cost = 0.0;
  double live_cost = 0.0;
  double failed_cost = 0.0;
  double total = 0.0;

  static std::string csv_header();
  std::string csv_row() const;
};

/// Tree edge ids of a single-seed cascade; throws if an arc is not an edge of g.
std::vector<EdgeId> tree_edges(const Cascade& c, const Graph& g);

/// Throws InvalidInputError if the tree touches S_0.
BoundarySets boundary_sets(const Cascade& c, const Graph& g, const NodeMask& s0);

/// Approximate cost: every chord pays d_e regardless of depths.
CostBreakdown cascade_cost(const Cascade& c, const Graph& g, const CostModel& cm, const NodeMask& s0);

/// Exact log-probability of the tree: chords joining equidistant nodes are
/// excluded. Requires the cascade's depth map.
double cascade_log_probability(const Cascade& c, const Graph& g, const CostModel& cm, const NodeMask& s0);

/// One-hop cost. `cm` holds per-arc c/d and per-node a/b of the bipartite
/// instance. Seeding a node with a_v = +inf yields +inf.
OneHopCostBreakdown one_hop_cost(const Cascade& c, const BipartiteExpansion& bip, const CostModel& cm);

/// Costs for a bipartite instance where every source has seed probability p0
/// and targets cannot be seeded.
CostModel compute_one_hop_costs(const BipartiteExpansion& bip, double p0);
CostModel compute_one_hop_costs(const BipartiteExpansion& bip, std::span<const double> source_seed_probs);

}  // namespace poolcascade
