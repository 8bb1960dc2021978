#include "poolcascade/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "poolcascade/errors.hpp"

namespace poolcascade {

namespace {

constexpr double kRelTol = 1e-12;

bool strictly_less(double a, double b) { return a < b - kRelTol * std::max(1.0, std::abs(b)); }
bool nearly_equal(double a, double b) { return !strictly_less(a, b) && !strictly_less(b, a); }

// A "link" is a metric-closure edge (from, to); the final tree is the union
// of the underlying shortest paths.
using Link = std::pair<NodeId, NodeId>;

struct Partial {
  double cost = 0.0;
  std::vector<Link> links;
  std::vector<NodeId> covered;
};

struct Candidate {
  double density = kInfinity;
  NodeId v = -1;
  std::size_t take = 0;

  // Lower density wins; ties go to the lower node id, then to the larger budget.
  bool improved_by(double dens, NodeId node, std::size_t k) const {
    if (v < 0 || strictly_less(dens, density)) return true;
    return nearly_equal(dens, density) && node == v && k > take;
  }
};

class GeneralSolver {
 public:
  GeneralSolver(const WeightedDigraph& dg, std::span<const NodeId> terminals)
      : closure_(dg), terminals_(terminals.begin(), terminals.end()) {}

  Partial solve(int level, std::size_t k, NodeId r, std::vector<std::uint8_t>& alive) const {
    if (level <= 1) return nearest(k, r, alive);
    Partial out;
    std::vector<std::uint8_t> local = alive;
    std::size_t remaining = k;
    while (remaining > 0) {
      Candidate best;
      Partial best_sub;
      double best_dist = 0.0;
      for (std::size_t vi = 0; vi < closure_.num_nodes(); ++vi) {
        auto v = static_cast<NodeId>(vi);
        double drv = closure_.dist(r, v);
        if (drv == kInfinity) continue;
        for (std::size_t kp = 1; kp <= remaining; ++kp) {
          std::vector<std::uint8_t> scratch = local;
          Partial sub = solve(level - 1, kp, v, scratch);
          if (sub.covered.empty()) break;
          std::size_t got = sub.covered.size();
          double dens = (drv + sub.cost) / static_cast<double>(got);
          if (best.improved_by(dens, v, kp)) {
            best = {dens, v, kp};
            best_sub = std::move(sub);
            best_dist = drv;
          }
          if (got < kp) break;
        }
      }
      if (best.v < 0) break;
      out.cost += best_dist + best_sub.cost;
      if (best.v != r) out.links.emplace_back(r, best.v);
      out.links.insert(out.links.end(), best_sub.links.begin(), best_sub.links.end());
      for (NodeId t : best_sub.covered) {
        local[static_cast<std::size_t>(t)] = 0;
        out.covered.push_back(t);
      }
      remaining -= std::min(remaining, best_sub.covered.size());
    }
    alive = std::move(local);
    return out;
  }

  const MetricClosure& closure() const { return closure_; }

 private:
  Partial nearest(std::size_t k, NodeId r, std::vector<std::uint8_t>& alive) const {
    std::vector<std::pair<double, NodeId>> order;
    for (NodeId t : terminals_) {
      if (!alive[static_cast<std::size_t>(t)]) continue;
      double d = closure_.dist(r, t);
      if (d < kInfinity) order.emplace_back(d, t);
    }
    std::sort(order.begin(), order.end());
    Partial out;
    for (std::size_t i = 0; i < order.size() && i < k; ++i) {
      out.cost += order[i].first;
      if (order[i].second != r) out.links.emplace_back(r, order[i].second);
      out.covered.push_back(order[i].second);
      alive[static_cast<std::size_t>(order[i].second)] = 0;
    }
    return out;
  }

  MetricClosure closure_;
  std::vector<NodeId> terminals_;
};

// Level 2 needs distances root->v and v->t only, so k+1 single-source runs
// replace the full closure.
struct LevelTwoSelection {
  std::vector<Link> links;
  std::vector<std::vector<int>> paths;
  std::vector<NodeId> covered;
};

LevelTwoSelection level_two(const WeightedDigraph& dg, NodeId root, std::span<const NodeId> terminals,
                            std::size_t k) {
  const std::size_t n = dg.num_nodes();
  ShortestPathTree from_root = dijkstra(dg, root);
  std::vector<ShortestPathTree> to_terminal;
  to_terminal.reserve(terminals.size());
  for (NodeId t : terminals) to_terminal.push_back(reverse_dijkstra(dg, t));

  // For each v, terminal indices ordered by distance from v.
  std::vector<std::vector<std::pair<double, std::size_t>>> by_v(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (!from_root.reachable(static_cast<NodeId>(v))) continue;
    for (std::size_t ti = 0; ti < terminals.size(); ++ti) {
      double d = to_terminal[ti].dist[v];
      if (d < kInfinity) by_v[v].emplace_back(d, ti);
    }
    std::sort(by_v[v].begin(), by_v[v].end());
  }

  std::vector<std::uint8_t> alive(terminals.size(), 1);
  LevelTwoSelection sel;
  std::size_t remaining = k;
  while (remaining > 0) {
    Candidate best;
    for (std::size_t v = 0; v < n; ++v) {
      if (by_v[v].empty()) continue;
      double prefix = from_root.dist[v];
      std::size_t taken = 0;
      for (const auto& [d, ti] : by_v[v]) {
        if (!alive[ti]) continue;
        prefix += d;
        ++taken;
        double dens = prefix / static_cast<double>(taken);
        if (best.improved_by(dens, static_cast<NodeId>(v), taken)) best = {dens, static_cast<NodeId>(v), taken};
        if (taken == remaining) break;
      }
    }
    if (best.v < 0) break;
    auto v = static_cast<std::size_t>(best.v);
    sel.paths.push_back(from_root.path_arcs(dg, best.v));
    std::size_t taken = 0;
    for (const auto& [d, ti] : by_v[v]) {
      if (taken == best.take) break;
      if (!alive[ti]) continue;
      alive[ti] = 0;
      ++taken;
      sel.covered.push_back(terminals[ti]);
      sel.paths.push_back(to_terminal[ti].path_arcs(dg, best.v));
    }
    remaining -= taken;
  }
  return sel;
}

// Shortest-path tree of the union of the chosen paths, then repeated removal
// of leaves that are not terminals.
SteinerTree assemble(const WeightedDigraph& dg, NodeId root, const std::vector<int>& union_arcs,
                     const std::vector<std::uint8_t>& is_terminal) {
  std::vector<int> arcs = union_arcs;
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  WeightedDigraph sub(dg.num_nodes());
  for (int a : arcs) sub.add_arc(dg.arc(a).from, dg.arc(a).to, dg.arc(a).weight);
  ShortestPathTree spt = dijkstra(sub, root);

  const std::size_t n = dg.num_nodes();
  std::vector<int> parent_arc(n, -1);
  std::vector<int> children(n, 0);
  std::vector<std::uint8_t> in_tree(n, 0);
  in_tree[static_cast<std::size_t>(root)] = 1;
  for (std::size_t v = 0; v < n; ++v) {
    int sa = spt.link[v];
    if (sa < 0) continue;
    parent_arc[v] = arcs[static_cast<std::size_t>(sa)];
    in_tree[v] = 1;
    ++children[static_cast<std::size_t>(dg.arc(parent_arc[v]).from)];
  }
  std::vector<NodeId> stack;
  for (std::size_t v = 0; v < n; ++v) {
    if (in_tree[v] && children[v] == 0 && !is_terminal[v] && static_cast<NodeId>(v) != root) {
      stack.push_back(static_cast<NodeId>(v));
    }
  }
  while (!stack.empty()) {
    auto v = static_cast<std::size_t>(stack.back());
    stack.pop_back();
    in_tree[v] = 0;
    auto p = static_cast<std::size_t>(dg.arc(parent_arc[v]).from);
    parent_arc[v] = -1;
    if (--children[p] == 0 && !is_terminal[p] && static_cast<NodeId>(p) != root) {
      stack.push_back(static_cast<NodeId>(p));
    }
  }

  SteinerTree tree;
  tree.root = root;
  std::vector<double> weights;
  for (std::size_t v = 0; v < n; ++v) {
    if (!in_tree[v]) continue;
    if (parent_arc[v] >= 0) {
      tree.arcs.push_back(parent_arc[v]);
      weights.push_back(dg.arc(parent_arc[v]).weight);
    }
    if (is_terminal[v]) tree.covered_terminals.push_back(static_cast<NodeId>(v));
  }
  std::sort(tree.arcs.begin(), tree.arcs.end());
  std::sort(weights.begin(), weights.end());
  tree.weight = std::accumulate(weights.begin(), weights.end(), 0.0);
  return tree;
}

}  // namespace

SteinerTree directed_steiner_tree(const WeightedDigraph& dg, NodeId root, std::span<const NodeId> terminals,
                                  std::size_t k, int level) {
  const std::size_t n = dg.num_nodes();
  if (root < 0 || static_cast<std::size_t>(root) >= n) {
    throw InvalidInputError(fmt::format("root {} out of range", root));
  }
  if (level < 1) throw InvalidInputError("recursion level must be at least 1");
  std::vector<std::uint8_t> is_terminal(n, 0);
  std::vector<NodeId> unique_terminals;
  for (NodeId t : terminals) {
    if (t < 0 || static_cast<std::size_t>(t) >= n) {
      throw InvalidInputError(fmt::format("terminal {} out of range", t));
    }
    if (!is_terminal[static_cast<std::size_t>(t)]) unique_terminals.push_back(t);
    is_terminal[static_cast<std::size_t>(t)] = 1;
  }
  if (k > unique_terminals.size()) {
    throw InvalidInputError(fmt::format("asked to cover {} of {} terminals", k, unique_terminals.size()));
  }

  ShortestPathTree from_root = dijkstra(dg, root);
  std::size_t reachable = 0;
  for (NodeId t : unique_terminals) reachable += from_root.reachable(t) ? 1 : 0;
  if (reachable < k) {
    throw InfeasibleError(InfeasibleReason::unreachable_pool,
                          fmt::format("only {} of {} required terminals reachable from the root", reachable, k));
  }
  if (k == 0) {
    SteinerTree empty;
    empty.root = root;
    return empty;
  }

  std::vector<int> union_arcs;
  if (level == 1) {
    std::vector<std::pair<double, NodeId>> order;
    for (NodeId t : unique_terminals) {
      if (from_root.reachable(t)) order.emplace_back(from_root.dist[static_cast<std::size_t>(t)], t);
    }
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < k; ++i) {
      auto p = from_root.path_arcs(dg, order[i].second);
      union_arcs.insert(union_arcs.end(), p.begin(), p.end());
    }
  } else if (level == 2) {
    LevelTwoSelection sel = level_two(dg, root, unique_terminals, k);
    for (const auto& p : sel.paths) union_arcs.insert(union_arcs.end(), p.begin(), p.end());
  } else {
    GeneralSolver solver(dg, unique_terminals);
    std::vector<std::uint8_t> alive = is_terminal;
    Partial part = solver.solve(level, k, root, alive);
    for (const auto& [a, b] : part.links) {
      auto p = solver.closure().path_arcs(a, b);
      union_arcs.insert(union_arcs.end(), p.begin(), p.end());
    }
  }

  SteinerTree tree = assemble(dg, root, union_arcs, is_terminal);
  if (tree.covered_terminals.size() < k) {
    throw InternalError(fmt::format("steiner tree covers {} of {} terminals", tree.covered_terminals.size(), k));
  }
  return tree;
}

ReducedGraph gst_reduce(const Graph& g, std::span<const double> node_weight, std::span<const double> edge_weight,
                        const std::vector<std::vector<NodeId>>& groups, const NodeMask* excluded) {
  const std::size_t n = g.num_nodes();
  if (node_weight.size() != n || edge_weight.size() != g.num_edges()) {
    throw InvalidInputError("weight vectors do not match the graph");
  }
  if (excluded && excluded->size() != n) throw InvalidInputError("exclusion mask has the wrong size");
  auto dropped = [&](NodeId v) { return excluded && (*excluded)[static_cast<std::size_t>(v)]; };

  ReducedGraph rg;
  rg.num_original_nodes = n;
  rg.digraph = WeightedDigraph(2 * n + groups.size());
  for (std::size_t u = 0; u < n; ++u) {
    auto uid = static_cast<NodeId>(u);
    if (dropped(uid)) continue;
    if (!(node_weight[u] >= 0.0)) {
      throw InvalidInputError(fmt::format("negative node weight {} at node {}", node_weight[u], u));
    }
    rg.digraph.add_arc(rg.in_copy(uid), rg.out_copy(uid), node_weight[u]);
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(static_cast<EdgeId>(e));
    if (dropped(edge.u) || dropped(edge.v)) continue;
    if (!(edge_weight[e] >= 0.0)) {
      throw InvalidInputError(fmt::format("negative edge weight {} on edge ({}, {})", edge_weight[e], edge.u, edge.v));
    }
    rg.digraph.add_arc(rg.out_copy(edge.u), rg.in_copy(edge.v), edge_weight[e]);
    rg.digraph.add_arc(rg.out_copy(edge.v), rg.in_copy(edge.u), edge_weight[e]);
  }
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    auto dummy = static_cast<NodeId>(2 * n + gi);
    rg.terminals.push_back(dummy);
    std::set<NodeId> members(groups[gi].begin(), groups[gi].end());
    for (NodeId v : members) {
      if (!g.contains(v)) throw InvalidInputError(fmt::format("group member {} not in graph", v));
      if (!dropped(v)) rg.digraph.add_arc(rg.out_copy(v), dummy, 0.0);
    }
  }
  return rg;
}

GroupSteinerResult group_steiner_tree(const Graph& g, std::span<const double> node_weight,
                                      std::span<const double> edge_weight, NodeId root,
                                      const std::vector<std::vector<NodeId>>& groups, int level,
                                      const NodeMask* excluded) {
  if (!g.contains(root)) throw InvalidInputError(fmt::format("root {} not in graph", root));
  if (excluded && excluded->size() == g.num_nodes() && (*excluded)[static_cast<std::size_t>(root)]) {
    throw InfeasibleError(InfeasibleReason::root_in_negative_pool, fmt::format("root {} is excluded", root));
  }
  ReducedGraph rg = gst_reduce(g, node_weight, edge_weight, groups, excluded);
  SteinerTree st = directed_steiner_tree(rg.digraph, rg.in_copy(root), rg.terminals, rg.terminals.size(), level);

  GroupSteinerResult out;
  out.root = root;
  std::set<NodeId> nodes{root};
  for (int a : st.arcs) {
    const auto& arc = rg.digraph.arc(a);
    if (rg.is_terminal(arc.to)) continue;
    NodeId from = rg.original(arc.from);
    NodeId to = rg.original(arc.to);
    if (from == to) {
      nodes.insert(from);
    } else {
      out.tree_arcs.emplace_back(from, to);
    }
  }
  std::sort(out.tree_arcs.begin(), out.tree_arcs.end());
  out.nodes.assign(nodes.begin(), nodes.end());
  std::vector<double> weights;
  for (NodeId v : out.nodes) weights.push_back(node_weight[static_cast<std::size_t>(v)]);
  for (const auto& [u, v] : out.tree_arcs) {
    EdgeId e = *g.find_edge(u, v);
    out.edges.push_back(e);
    weights.push_back(edge_weight[static_cast<std::size_t>(e)]);
  }
  std::sort(weights.begin(), weights.end());
  out.weight = std::accumulate(weights.begin(), weights.end(), 0.0);
  return out;
}

}  // namespace poolcascade
