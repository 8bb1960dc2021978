#pragma once

#include <map>
#include <utility>
#include <vector>

#include "poolcascade/graph.hpp"

namespace poolcascade {

enum class CascadeKind { single_seed, one_hop };

/// Directed pair: (parent, child) in a single-seed tree, (source, target) for a
/// one-hop live edge.
using Arc = std::pair<NodeId, NodeId>;

/// One realization (or hypothesis) of the diffusion process.
///
/// Single-seed cascades are trees rooted at `root` with parent-to-child arcs
/// and a recorded hop depth per node. One-hop cascades are a seed set plus
/// live edges, each starting at a seed and ending outside the seed set.
class Cascade {
 public:
  Cascade() = default;

  /// Validates that `arcs` form an out-tree rooted at `root`; throws
  /// InvalidInputError otherwise. Depths are computed by BFS.
  static Cascade single_seed(NodeId root, std::vector<Arc> arcs);
  /// Validates that every live edge starts at a seed and ends at a non-seed.
  static Cascade one_hop(std::vector<NodeId> seeds, std::vector<Arc> live_edges);

  CascadeKind kind() const { return kind_; }
  NodeId root() const { return root_; }
  const std::vector<NodeId>& seeds() const { return seeds_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  /// Sorted, duplicate-free.
  const std::vector<NodeId>& infected() const { return infected_; }
  const std::map<NodeId, int>& depth() const { return depth_; }
  bool has_depth() const { return !depth_.empty(); }
  bool contains(NodeId v) const;

 private:
  CascadeKind kind_ = CascadeKind::single_seed;
  NodeId root_ = -1;
  std::vector<NodeId> seeds_;
  std::vector<Arc> arcs_;
  std::vector<NodeId> infected_;
  std::map<NodeId, int> depth_;
};

}  // namespace poolcascade
