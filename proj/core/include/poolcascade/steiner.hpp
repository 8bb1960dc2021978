#pragma once

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "poolcascade/graph.hpp"

namespace poolcascade {

/// Directed graph with nonnegative arc weights.
class WeightedDigraph {
 public:
  struct Arc {
    NodeId from;
    NodeId to;
    double weight;
  };

  WeightedDigraph() = default;
  explicit WeightedDigraph(std::size_t num_nodes);

  NodeId add_node();
  /// Throws InvalidInputError on negative or non-finite weight.
  int add_arc(NodeId from, NodeId to, double weight);

  std::size_t num_nodes() const { return out_.size(); }
  std::size_t num_arcs() const { return arcs_.size(); }
  const Arc& arc(int a) const { return arcs_[static_cast<std::size_t>(a)]; }
  std::span<const Arc> arcs() const { return arcs_; }
  std::span<const int> out_arcs(NodeId v) const { return out_[static_cast<std::size_t>(v)]; }
  std::span<const int> in_arcs(NodeId v) const { return in_[static_cast<std::size_t>(v)]; }

  /// "from to weight" per line.
  std::string dump_arcs() const;

 private:
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

/// Single-source shortest paths. In a forward tree `link[v]` is the arc
/// entering v on a shortest root->v path; in a reverse tree it is the arc
/// leaving v on a shortest v->target path. -1 when unreachable or at the source.
struct ShortestPathTree {
  NodeId source = -1;
  bool reverse = false;
  std::vector<double> dist;
  std::vector<int> link;

  bool reachable(NodeId v) const { return dist[static_cast<std::size_t>(v)] < kInfinity; }
  /// Arcs of the shortest path between the tree source and v, in path order.
  std::vector<int> path_arcs(const WeightedDigraph& dg, NodeId v) const;
};

ShortestPathTree dijkstra(const WeightedDigraph& dg, NodeId source);
/// Distances from every node to `target`.
ShortestPathTree reverse_dijkstra(const WeightedDigraph& dg, NodeId target);

/// All-pairs shortest directed distances with path reconstruction.
class MetricClosure {
 public:
  explicit MetricClosure(const WeightedDigraph& dg);

  std::size_t num_nodes() const { return rows_.size(); }
  double dist(NodeId u, NodeId v) const { return rows_[static_cast<std::size_t>(u)].dist[static_cast<std::size_t>(v)]; }
  std::vector<int> path_arcs(NodeId u, NodeId v) const;
  const ShortestPathTree& row(NodeId u) const { return rows_[static_cast<std::size_t>(u)]; }

 private:
  const WeightedDigraph* dg_;
  std::vector<ShortestPathTree> rows_;
};

MetricClosure metric_closure(const WeightedDigraph& dg);

struct SteinerTree {
  NodeId root = -1;
  /// Arc ids of an out-arborescence rooted at `root`.
  std::vector<int> arcs;
  std::vector<NodeId> covered_terminals;
  double weight = 0.0;
};

/// Recursive greedy directed Steiner tree: level 1 joins the k nearest
/// terminals by shortest paths; level l repeatedly adds the minimum-density
/// combination of a shortest path root->v and a level l-1 tree from v.
/// Throws InfeasibleError when fewer than k terminals are reachable.
SteinerTree directed_steiner_tree(const WeightedDigraph& dg, NodeId root, std::span<const NodeId> terminals,
                                  std::size_t k, int level = 2);

/// Node- and edge-weighted group Steiner instance reduced to a directed one.
/// Node u becomes u_in -> u_out (weight w(u)); edge {u, v} becomes
/// u_out -> v_in and v_out -> u_in (weight w(u,v)); group g gets a dummy
/// terminal with zero-weight arcs from the out-copies of its members.
struct ReducedGraph {
  WeightedDigraph digraph;
  std::vector<NodeId> terminals;
  std::size_t num_original_nodes = 0;

  NodeId in_copy(NodeId u) const { return 2 * u; }
  NodeId out_copy(NodeId u) const { return 2 * u + 1; }
  bool is_terminal(NodeId x) const { return static_cast<std::size_t>(x) >= 2 * num_original_nodes; }
  /// Original node of an in/out copy.
  NodeId original(NodeId x) const { return x / 2; }
};

/// Nodes flagged in `excluded` get no arcs and are dropped from groups.
/// Throws InvalidInputError on negative weights.
ReducedGraph gst_reduce(const Graph& g, std::span<const double> node_weight, std::span<const double> edge_weight,
                        const std::vector<std::vector<NodeId>>& groups, const NodeMask* excluded = nullptr);

struct GroupSteinerResult {
  NodeId root = -1;
  std::vector<NodeId> nodes;               // sorted
  std::vector<EdgeId> edges;
  std::vector<std::pair<NodeId, NodeId>> tree_arcs;  // (parent, child) in the original graph
  double weight = 0.0;                     // sum of node weights over nodes + edge weights over edges
};

/// Tree containing `root` and at least one node of every group. The root
/// enters the reduced graph at its in-copy so w(root) is paid.
/// Throws InfeasibleError(unreachable_pool) if some group cannot be reached.
GroupSteinerResult group_steiner_tree(const Graph& g, std::span<const double> node_weight,
                                      std::span<const double> edge_weight, NodeId root,
                                      const std::vector<std::vector<NodeId>>& groups, int level = 2,
                                      const NodeMask* excluded = nullptr);

}  // namespace poolcascade
