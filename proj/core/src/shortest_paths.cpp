#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include <fmt/format.h>

#include "poolcascade/errors.hpp"
#include "poolcascade/steiner.hpp"

namespace poolcascade {

WeightedDigraph::WeightedDigraph(std::size_t num_nodes) : out_(num_nodes), in_(num_nodes) {}

NodeId WeightedDigraph::add_node() {
  out_.emplace_back();
  in_.emplace_back();
  return static_cast<NodeId>(out_.size() - 1);
}

int WeightedDigraph::add_arc(NodeId from, NodeId to, double weight) {
  auto n = static_cast<NodeId>(num_nodes());
  if (from < 0 || to < 0 || from >= n || to >= n) {
    throw InvalidInputError(fmt::format("arc ({}, {}) out of range", from, to));
  }
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw InvalidInputError(fmt::format("arc ({}, {}) has invalid weight {}", from, to, weight));
  }
  int id = static_cast<int>(arcs_.size());
  arcs_.push_back({from, to, weight});
  out_[static_cast<std::size_t>(from)].push_back(id);
  in_[static_cast<std::size_t>(to)].push_back(id);
  return id;
}

std::string WeightedDigraph::dump_arcs() const {
  std::string out;
  for (const auto& a : arcs_) out += fmt::format("{} {} {:.12g}\n", a.from, a.to, a.weight);
  return out;
}

namespace {

ShortestPathTree run_dijkstra(const WeightedDigraph& dg, NodeId source, bool reverse) {
  if (source < 0 || static_cast<std::size_t>(source) >= dg.num_nodes()) {
    throw InvalidInputError(fmt::format("source {} out of range", source));
  }
  ShortestPathTree t;
  t.source = source;
  t.reverse = reverse;
  t.dist.assign(dg.num_nodes(), kInfinity);
  t.link.assign(dg.num_nodes(), -1);
  std::vector<std::uint8_t> done(dg.num_nodes(), 0);

  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  t.dist[static_cast<std::size_t>(source)] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (done[static_cast<std::size_t>(u)]) continue;
    done[static_cast<std::size_t>(u)] = 1;
    for (int a : reverse ? dg.in_arcs(u) : dg.out_arcs(u)) {
      const auto& arc = dg.arc(a);
      NodeId v = reverse ? arc.from : arc.to;
      double nd = du + arc.weight;
      auto vi = static_cast<std::size_t>(v);
      if (nd < t.dist[vi]) {
        t.dist[vi] = nd;
        t.link[vi] = a;
        heap.emplace(nd, v);
      }
    }
  }
  return t;
}

}  // namespace

std::vector<int> ShortestPathTree::path_arcs(const WeightedDigraph& dg, NodeId v) const {
  std::vector<int> path;
  if (!reachable(v)) return path;
  NodeId cur = v;
  while (cur != source) {
    int a = link[static_cast<std::size_t>(cur)];
    path.push_back(a);
    cur = reverse ? dg.arc(a).to : dg.arc(a).from;
  }
  if (!reverse) std::reverse(path.begin(), path.end());
  return path;
}

ShortestPathTree dijkstra(const WeightedDigraph& dg, NodeId source) { return run_dijkstra(dg, source, false); }

ShortestPathTree reverse_dijkstra(const WeightedDigraph& dg, NodeId target) {
  return run_dijkstra(dg, target, true);
}

MetricClosure::MetricClosure(const WeightedDigraph& dg) : dg_(&dg) {
  rows_.reserve(dg.num_nodes());
  for (std::size_t u = 0; u < dg.num_nodes(); ++u) rows_.push_back(dijkstra(dg, static_cast<NodeId>(u)));
}

std::vector<int> MetricClosure::path_arcs(NodeId u, NodeId v) const { return row(u).path_arcs(*dg_, v); }

MetricClosure metric_closure(const WeightedDigraph& dg) { return MetricClosure(dg); }

}  // namespace poolcascade
