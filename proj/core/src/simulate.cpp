#include "poolcascade/simulate.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include <fmt/format.h>

#include "poolcascade/errors.hpp"

namespace poolcascade {

// ---------------------------------------------------------------------------
// Cascade

Cascade Cascade::single_seed(NodeId root, std::vector<Arc> arcs) {
  Cascade c;
  c.kind_ = CascadeKind::single_seed;
  c.root_ = root;

  std::unordered_map<NodeId, std::vector<NodeId>> children;
  std::unordered_map<NodeId, NodeId> parent;
  for (const auto& [from, to] : arcs) {
    if (to == root) {
      throw InvalidInputError(fmt::format("arc ({}, {}) enters the root", from, to));
    }
    if (!parent.emplace(to, from).second) {
      throw InvalidInputError(fmt::format("node {} has two parents", to));
    }
    children[from].push_back(to);
  }
  c.depth_[root] = 0;
  std::deque<NodeId> queue{root};
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    auto it = children.find(u);
    if (it == children.end()) continue;
    for (NodeId v : it->second) {
      c.depth_[v] = c.depth_[u] + 1;
      queue.push_back(v);
    }
  }
  if (c.depth_.size() != arcs.size() + 1) {
    throw InvalidInputError("arcs do not form a tree rooted at the root");
  }
  c.infected_.reserve(c.depth_.size());
  for (const auto& [v, d] : c.depth_) c.infected_.push_back(v);
  c.arcs_ = std::move(arcs);
  return c;
}

Cascade Cascade::one_hop(std::vector<NodeId> seeds, std::vector<Arc> live_edges) {
  Cascade c;
  c.kind_ = CascadeKind::one_hop;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  for (const auto& [from, to] : live_edges) {
    if (!std::binary_search(seeds.begin(), seeds.end(), from)) {
      throw InvalidInputError(fmt::format("live edge ({}, {}) does not start at a seed", from, to));
    }
    if (std::binary_search(seeds.begin(), seeds.end(), to)) {
      throw InvalidInputError(fmt::format("live edge ({}, {}) ends at a seed", from, to));
    }
  }
  c.infected_ = seeds;
  for (const auto& arc : live_edges) c.infected_.push_back(arc.second);
  std::sort(c.infected_.begin(), c.infected_.end());
  c.infected_.erase(std::unique(c.infected_.begin(), c.infected_.end()), c.infected_.end());
  c.seeds_ = std::move(seeds);
  c.arcs_ = std::move(live_edges);
  return c;
}

bool Cascade::contains(NodeId v) const { return std::binary_search(infected_.begin(), infected_.end(), v); }

// ---------------------------------------------------------------------------
// BipartiteExpansion

BipartiteExpansion::BipartiteExpansion(std::size_t num_sources, std::size_t num_targets)
    : num_sources_(num_sources),
      num_targets_(num_targets),
      out_(num_sources),
      in_(num_targets),
      origin_(num_sources + num_targets) {
  for (std::size_t v = 0; v < origin_.size(); ++v) origin_[v] = static_cast<NodeId>(v);
}

int BipartiteExpansion::add_arc(NodeId source, NodeId target, double prob, EdgeId origin_edge) {
  if (!is_source(source) || !is_target(target)) {
    throw InvalidInputError(fmt::format("arc ({}, {}) must go from a source to a target", source, target));
  }
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw InvalidInputError(fmt::format("arc probability {} outside [0, 1]", prob));
  }
  auto id = static_cast<int>(arcs_.size());
  arcs_.push_back({source, target, prob, origin_edge});
  out_[static_cast<std::size_t>(source)].push_back(id);
  in_[static_cast<std::size_t>(target) - num_sources_].push_back(id);
  return id;
}

std::span<const int> BipartiteExpansion::in_arcs(NodeId target) const {
  return in_[static_cast<std::size_t>(target) - num_sources_];
}

std::vector<double> BipartiteExpansion::arc_probabilities() const {
  std::vector<double> probs;
  probs.reserve(arcs_.size());
  for (const auto& a : arcs_) probs.push_back(a.prob);
  return probs;
}

BipartiteExpansion time_expand(const Graph& g) {
  const std::size_t n = g.num_nodes();
  BipartiteExpansion bip(n, n);
  for (std::size_t u = 0; u < n; ++u) {
    bip.set_origin(bip.source_copy(static_cast<NodeId>(u)), static_cast<NodeId>(u));
    bip.set_origin(bip.target_copy(static_cast<NodeId>(u)), static_cast<NodeId>(u));
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(static_cast<EdgeId>(e));
    bip.add_arc(bip.source_copy(edge.u), bip.target_copy(edge.v), edge.prob, static_cast<EdgeId>(e));
    bip.add_arc(bip.source_copy(edge.v), bip.target_copy(edge.u), edge.prob, static_cast<EdgeId>(e));
  }
  return bip;
}

BipartiteExpansion split_bipartite(const Graph& g, std::span<const NodeId> sources) {
  NodeMask is_source = make_mask(g.num_nodes(), sources);
  std::vector<NodeId> index(g.num_nodes(), -1);
  std::size_t num_sources = 0;
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    if (is_source[v]) index[v] = static_cast<NodeId>(num_sources++);
  }
  std::size_t num_targets = 0;
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    if (!is_source[v]) index[v] = static_cast<NodeId>(num_sources + num_targets++);
  }
  BipartiteExpansion bip(num_sources, num_targets);
  for (std::size_t v = 0; v < g.num_nodes(); ++v) bip.set_origin(index[v], static_cast<NodeId>(v));
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(static_cast<EdgeId>(e));
    bool su = is_source[static_cast<std::size_t>(edge.u)] != 0;
    bool sv = is_source[static_cast<std::size_t>(edge.v)] != 0;
    if (su == sv) continue;
    NodeId s = su ? edge.u : edge.v;
    NodeId t = su ? edge.v : edge.u;
    bip.add_arc(index[static_cast<std::size_t>(s)], index[static_cast<std::size_t>(t)], edge.prob,
                static_cast<EdgeId>(e));
  }
  return bip;
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

void require_probabilities(const Graph& g) {
  if (!g.has_all_probabilities()) {
    throw InvalidInputError("every edge needs a transmission probability before simulation");
  }
}

}  // namespace

Cascade simulate_single_seed(const Graph& g, NodeId root, Rng& rng) {
  if (!g.contains(root)) {
    throw InvalidInputError(fmt::format("root {} is not a node of the graph", root));
  }
  require_probabilities(g);

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::uint8_t> infected(g.num_nodes(), 0);
  infected[static_cast<std::size_t>(root)] = 1;
  std::vector<NodeId> frontier{root};
  std::vector<Arc> arcs;
  // Successful attackers per target within the current step.
  std::vector<std::vector<NodeId>> attackers(g.num_nodes());
  std::vector<NodeId> hit;

  while (!frontier.empty()) {
    hit.clear();
    for (NodeId u : frontier) {
      for (const auto& inc : g.incident(u)) {
        if (infected[static_cast<std::size_t>(inc.neighbor)]) continue;
        if (unif(rng) < g.edge(inc.edge).prob) {
          auto& list = attackers[static_cast<std::size_t>(inc.neighbor)];
          if (list.empty()) hit.push_back(inc.neighbor);
          list.push_back(u);
        }
      }
    }
    std::sort(hit.begin(), hit.end());
    for (NodeId v : hit) {
      auto& list = attackers[static_cast<std::size_t>(v)];
      NodeId parent = list.size() == 1
                          ? list.front()
                          : list[std::uniform_int_distribution<std::size_t>(0, list.size() - 1)(rng)];
      arcs.emplace_back(parent, v);
      infected[static_cast<std::size_t>(v)] = 1;
      list.clear();
    }
    frontier = hit;
  }
  return Cascade::single_seed(root, std::move(arcs));
}

Cascade simulate_one_hop(const BipartiteExpansion& bip, double p0, Rng& rng) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) {
    throw InvalidInputError(fmt::format("seeding probability {} outside [0, 1]", p0));
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<NodeId> seeds;
  for (std::size_t s = 0; s < bip.num_sources(); ++s) {
    if (unif(rng) < p0) seeds.push_back(static_cast<NodeId>(s));
  }
  std::vector<Arc> live;
  for (NodeId s : seeds) {
    for (int a : bip.out_arcs(s)) {
      const auto& arc = bip.arc(a);
      if (unif(rng) < arc.prob) live.emplace_back(arc.source, arc.target);
    }
  }
  return Cascade::one_hop(std::move(seeds), std::move(live));
}

Cascade simulate_one_hop(const Graph& g, double p0, Rng& rng) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) {
    throw InvalidInputError(fmt::format("seeding probability {} outside [0, 1]", p0));
  }
  require_probabilities(g);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::uint8_t> seeded(g.num_nodes(), 0);
  std::vector<NodeId> seeds;
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    if (unif(rng) < p0) {
      seeded[v] = 1;
      seeds.push_back(static_cast<NodeId>(v));
    }
  }
  std::vector<Arc> live;
  for (NodeId s : seeds) {
    for (const auto& inc : g.incident(s)) {
      if (seeded[static_cast<std::size_t>(inc.neighbor)]) continue;
      if (unif(rng) < g.edge(inc.edge).prob) live.emplace_back(s, inc.neighbor);
    }
  }
  return Cascade::one_hop(std::move(seeds), std::move(live));
}

}  // namespace poolcascade
