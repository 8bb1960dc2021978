#pragma once

#include <span>
#include <vector>

#include "poolcascade/cascade.hpp"
#include "poolcascade/graph.hpp"

namespace poolcascade {

/// Directed bipartite graph for the one-hop model. Sources occupy node ids
/// [0, num_sources) and targets [num_sources, num_sources + num_targets).
/// Every arc goes from a source to a target.
class BipartiteExpansion {
 public:
  struct ArcInfo {
    NodeId source;
    NodeId target;
    double prob;
    /// Originating undirected edge, or -1.
    EdgeId origin_edge;
  };

  BipartiteExpansion() = default;
  BipartiteExpansion(std::size_t num_sources, std::size_t num_targets);

  int add_arc(NodeId source, NodeId target, double prob, EdgeId origin_edge = -1);

  std::size_t num_sources() const { return num_sources_; }
  std::size_t num_targets() const { return num_targets_; }
  std::size_t num_nodes() const { return num_sources_ + num_targets_; }
  std::size_t num_arcs() const { return arcs_.size(); }

  const ArcInfo& arc(int a) const { return arcs_[static_cast<std::size_t>(a)]; }
  std::span<const ArcInfo> arcs() const { return arcs_; }
  std::span<const int> out_arcs(NodeId source) const { return out_[static_cast<std::size_t>(source)]; }
  std::span<const int> in_arcs(NodeId target) const;

  bool is_source(NodeId v) const { return v >= 0 && static_cast<std::size_t>(v) < num_sources_; }
  bool is_target(NodeId v) const {
    return static_cast<std::size_t>(v) >= num_sources_ && static_cast<std::size_t>(v) < num_nodes();
  }

  /// Original graph node each expanded node was copied from (identity when
  /// the instance was built by hand).
  NodeId origin(NodeId v) const { return origin_[static_cast<std::size_t>(v)]; }
  void set_origin(NodeId v, NodeId original) { origin_[static_cast<std::size_t>(v)] = original; }

  /// Source copy u_0 and target copy u_1 of original node u (time expansion only).
  NodeId source_copy(NodeId u) const { return u; }
  NodeId target_copy(NodeId u) const { return static_cast<NodeId>(num_sources_) + u; }

  /// Arc probabilities in arc order, for compute_costs_from_probabilities.
  std::vector<double> arc_probabilities() const;

 private:
  std::size_t num_sources_ = 0;
  std::size_t num_targets_ = 0;
  std::vector<ArcInfo> arcs_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::vector<NodeId> origin_;
};

/// Time-expanded copy: each edge {u, v} yields arcs (u_0, v_1) and (v_0, u_1)
/// carrying p_e.
BipartiteExpansion time_expand(const Graph& g);

/// Bipartite instance from an undirected graph with a declared source side:
/// edges crossing from `sources` to the rest become source-to-target arcs.
BipartiteExpansion split_bipartite(const Graph& g, std::span<const NodeId> sources);

/// Breadth-synchronous independent cascade from `root`. Each newly infectious
/// node attempts each susceptible neighbour once; when several attackers
/// succeed on the same node in one step the parent is drawn uniformly.
Cascade simulate_single_seed(const Graph& g, NodeId root, Rng& rng);

/// One step of spread: each source is seeded with probability p0, then each
/// arc out of a seed fires with its probability.
Cascade simulate_one_hop(const BipartiteExpansion& bip, double p0, Rng& rng);
/// Same on an undirected graph: any node may be seeded; edges from a seed to
/// a non-seed fire with p_e.
Cascade simulate_one_hop(const Graph& g, double p0, Rng& rng);

}  // namespace poolcascade
