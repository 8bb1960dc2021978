#include "poolcascade/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "poolcascade/cost.hpp"
#include "poolcascade/errors.hpp"

namespace poolcascade {

namespace {

constexpr std::size_t kSpanningTreeBudget = 50'000'000;

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

class SpanningTreeWalker {
 public:
  SpanningTreeWalker(std::size_t n, std::span<const std::pair<int, int>> edges,
                     const std::function<void(std::span<const int>)>& visit)
      : n_(n), edges_(edges), visit_(visit) {}

  std::size_t run() {
    if (n_ <= 1) {
      visit_({});
      return 1;
    }
    if (!connected(0, {})) return 0;
    std::vector<int> chosen;
    recurse(0, chosen);
    return count_;
  }

 private:
  // Whether chosen edges plus edges[from..] connect all nodes.
  bool connected(std::size_t from, const std::vector<int>& chosen) const {
    DisjointSets ds(n_);
    std::size_t comps = n_;
    for (int e : chosen) comps -= ds.unite(edges_[static_cast<std::size_t>(e)].first, edges_[static_cast<std::size_t>(e)].second);
    for (std::size_t e = from; e < edges_.size(); ++e) comps -= ds.unite(edges_[e].first, edges_[e].second);
    return comps == 1;
  }

  bool acyclic_with(const std::vector<int>& chosen, std::size_t e) const {
    DisjointSets ds(n_);
    for (int c : chosen) ds.unite(edges_[static_cast<std::size_t>(c)].first, edges_[static_cast<std::size_t>(c)].second);
    return ds.unite(edges_[e].first, edges_[e].second);
  }

  void recurse(std::size_t i, std::vector<int>& chosen) {
    if (chosen.size() + 1 == n_) {
      if (++count_ > kSpanningTreeBudget) {
        throw LimitExceededError("spanning tree enumeration exceeded its budget");
      }
      visit_(chosen);
      return;
    }
    if (i >= edges_.size() || n_ - 1 - chosen.size() > edges_.size() - i) return;
    if (acyclic_with(chosen, i)) {
      chosen.push_back(static_cast<int>(i));
      recurse(i + 1, chosen);
      chosen.pop_back();
    }
    if (connected(i + 1, chosen)) recurse(i + 1, chosen);
  }

  std::size_t n_;
  std::span<const std::pair<int, int>> edges_;
  const std::function<void(std::span<const int>)>& visit_;
  std::size_t count_ = 0;
};

double sorted_total(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

}  // namespace

std::size_t for_each_spanning_tree(std::size_t num_nodes, std::span<const std::pair<int, int>> edges,
                                   const std::function<void(std::span<const int>)>& visit) {
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= num_nodes || static_cast<std::size_t>(v) >= num_nodes) {
      throw InvalidInputError(fmt::format("edge ({}, {}) out of range", u, v));
    }
  }
  return SpanningTreeWalker(num_nodes, edges, visit).run();
}

OracleResult brute_force_pool_mle(const Graph& g, const CostModel& cm, NodeId root, const PoolSet& ps,
                                  const Observation& obs, std::size_t n_cap) {
  const std::size_t n = g.num_nodes();
  if (n > n_cap) throw LimitExceededError(fmt::format("graph has {} nodes, oracle cap is {}", n, n_cap));
  if (!g.contains(root)) throw InvalidInputError(fmt::format("root {} not in graph", root));
  if (obs.size() != ps.size()) throw InvalidInputError("observation does not match pools");
  NodeMask s0 = negative_mask(ps, obs, n);
  if (s0[static_cast<std::size_t>(root)]) {
    throw InfeasibleError(InfeasibleReason::root_in_negative_pool, "root belongs to a negative pool");
  }

  std::vector<NodeId> others;
  for (std::size_t v = 0; v < n; ++v) {
    if (static_cast<NodeId>(v) != root && !s0[v]) others.push_back(static_cast<NodeId>(v));
  }

  OracleResult best;
  double best_cost = kInfinity;
  bool found = false;
  const std::uint64_t subsets = std::uint64_t{1} << others.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    std::vector<NodeId> nodes{root};
    for (std::size_t i = 0; i < others.size(); ++i) {
      if ((mask >> i) & 1U) nodes.push_back(others[i]);
    }
    std::sort(nodes.begin(), nodes.end());
    if (!is_consistent(nodes, obs, ps)) continue;

    std::vector<int> local(n, -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) local[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
    std::vector<std::pair<int, int>> induced;
    std::vector<EdgeId> induced_ids;
    std::vector<double> fixed;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const Edge& edge = g.edge(static_cast<EdgeId>(e));
      int lu = local[static_cast<std::size_t>(edge.u)];
      int lv = local[static_cast<std::size_t>(edge.v)];
      if (lu >= 0 && lv >= 0) {
        induced.emplace_back(lu, lv);
        induced_ids.push_back(static_cast<EdgeId>(e));
        fixed.push_back(cm.d(static_cast<EdgeId>(e)));
      } else if (lu >= 0 || lv >= 0) {
        fixed.push_back(cm.d(static_cast<EdgeId>(e)));
      }
    }
    // Every induced edge pays d unless it is in the tree, where it pays c.
    double base = sorted_total(fixed);
    for_each_spanning_tree(nodes.size(), induced, [&](std::span<const int> tree) {
      ++best.instances_enumerated;
      double cost = base;
      for (int t : tree) {
        EdgeId e = induced_ids[static_cast<std::size_t>(t)];
        cost += cm.c(e) - cm.d(e);
      }
      if (cost < best_cost) {
        best_cost = cost;
        found = true;
        std::vector<std::pair<NodeId, NodeId>> undirected;
        for (int t : tree) {
          const Edge& edge = g.edge(induced_ids[static_cast<std::size_t>(t)]);
          undirected.emplace_back(edge.u, edge.v);
        }
        // Orient away from the root.
        std::vector<Arc> arcs;
        std::vector<NodeId> frontier{root};
        std::vector<std::uint8_t> used(undirected.size(), 0);
        while (!frontier.empty()) {
          NodeId u = frontier.back();
          frontier.pop_back();
          for (std::size_t k = 0; k < undirected.size(); ++k) {
            if (used[k]) continue;
            auto [a, b] = undirected[k];
            if (a != u && b != u) continue;
            used[k] = 1;
            NodeId child = a == u ? b : a;
            arcs.emplace_back(u, child);
            frontier.push_back(child);
          }
        }
        best.optimal_cascade = Cascade::single_seed(root, std::move(arcs));
      }
    });
  }
  if (!found) {
    throw InfeasibleError(InfeasibleReason::no_consistent_cascade, "no consistent tree exists");
  }
  best.optimal_cost = cascade_cost(best.optimal_cascade, g, cm, s0).total;
  return best;
}

OracleResult brute_force_one_hop_mle(const BipartiteExpansion& bip, const CostModel& cm, const PoolSet& ps,
                                     const Observation& obs, std::size_t log2_budget) {
  if (obs.size() != ps.size()) throw InvalidInputError("observation does not match pools");
  const std::size_t n = bip.num_nodes();
  const std::uint64_t budget = std::uint64_t{1} << std::min<std::size_t>(log2_budget, 62);
  NodeMask s0 = negative_mask(ps, obs, n);
  NodeMask in_positive(n, 0);
  for (int gi : obs.gamma1()) {
    for (NodeId v : ps.pools[static_cast<std::size_t>(gi)]) in_positive[static_cast<std::size_t>(v)] = 1;
  }

  std::vector<NodeId> seedable;
  for (std::size_t s = 0; s < bip.num_sources(); ++s) {
    if (std::isfinite(cm.seeding[s]) && !s0[s]) seedable.push_back(static_cast<NodeId>(s));
  }
  if (seedable.size() >= 63 || (std::uint64_t{1} << seedable.size()) > budget) {
    throw LimitExceededError(fmt::format("{} seedable sources exceed the oracle budget", seedable.size()));
  }

  OracleResult best;
  double best_cost = kInfinity;
  bool found = false;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << seedable.size()); ++mask) {
    std::vector<std::uint8_t> seeded(bip.num_sources(), 0);
    std::vector<NodeId> seeds;
    for (std::size_t i = 0; i < seedable.size(); ++i) {
      if ((mask >> i) & 1U) {
        seeded[static_cast<std::size_t>(seedable[i])] = 1;
        seeds.push_back(seedable[i]);
      }
    }
    // Arcs that can matter for consistency are enumerated; every other arc
    // out of a seed independently takes its cheaper state.
    std::vector<int> free_arcs;
    std::vector<int> default_live;
    std::vector<double> fixed;
    for (std::size_t s = 0; s < bip.num_sources(); ++s) {
      fixed.push_back(seeded[s] ? cm.a(static_cast<NodeId>(s)) : cm.b(static_cast<NodeId>(s)));
      if (!seeded[s]) continue;
      for (int a : bip.out_arcs(static_cast<NodeId>(s))) {
        auto t = static_cast<std::size_t>(bip.arc(a).target);
        if (s0[t]) {
          fixed.push_back(cm.d(a));
        } else if (in_positive[t]) {
          free_arcs.push_back(a);
        } else if (cm.c(a) < cm.d(a)) {
          fixed.push_back(cm.c(a));
          default_live.push_back(a);
        } else {
          fixed.push_back(cm.d(a));
        }
      }
    }
    if (free_arcs.size() >= 63 || best.instances_enumerated + (std::uint64_t{1} << free_arcs.size()) > budget) {
      throw LimitExceededError("one-hop oracle enumeration exceeds its budget");
    }
    double base = sorted_total(fixed);
    for (std::uint64_t live_mask = 0; live_mask < (std::uint64_t{1} << free_arcs.size()); ++live_mask) {
      ++best.instances_enumerated;
      double cost = base;
      std::vector<NodeId> infected = seeds;
      for (std::size_t k = 0; k < free_arcs.size(); ++k) {
        int a = free_arcs[k];
        if ((live_mask >> k) & 1U) {
          cost += cm.c(a);
          infected.push_back(bip.arc(a).target);
        } else {
          cost += cm.d(a);
        }
      }
      if (!(cost < best_cost)) continue;
      std::sort(infected.begin(), infected.end());
      infected.erase(std::unique(infected.begin(), infected.end()), infected.end());
      if (!is_consistent(infected, obs, ps)) continue;
      best_cost = cost;
      found = true;
      std::vector<Arc> live;
      for (int a : default_live) live.emplace_back(bip.arc(a).source, bip.arc(a).target);
      for (std::size_t k = 0; k < free_arcs.size(); ++k) {
        if ((live_mask >> k) & 1U) live.emplace_back(bip.arc(free_arcs[k]).source, bip.arc(free_arcs[k]).target);
      }
      best.optimal_cascade = Cascade::one_hop(seeds, std::move(live));
    }
  }
  if (!found) throw InfeasibleError(InfeasibleReason::no_consistent_cascade, "no consistent one-hop cascade");
  best.optimal_cost = one_hop_cost(best.optimal_cascade, bip, cm).total;
  return best;
}

double brute_force_one_hop_ilp(const OneHopLp& lp, std::size_t log2_budget) {
  const std::size_t nx = lp.seed_vars.size();
  const std::uint64_t budget = std::uint64_t{1} << std::min<std::size_t>(log2_budget, 62);
  if (nx >= 63 || (std::uint64_t{1} << nx) > budget) {
    throw LimitExceededError(fmt::format("{} seed variables exceed the ILP enumeration budget", nx));
  }
  const auto& obj = lp.program.objective;
  std::vector<std::vector<std::size_t>> cover_members;  // cover row -> y indices
  for (std::size_t r = 0; r < lp.row_kinds.size(); ++r) {
    if (lp.row_kinds[r] != OneHopLp::RowKind::cover) continue;
    std::vector<std::size_t> ys;
    for (const auto& [col, coef] : lp.program.rows[r].terms) {
      ys.push_back(static_cast<std::size_t>(col) - nx);
    }
    cover_members.push_back(std::move(ys));
  }

  double best = kInfinity;
  std::uint64_t spent = 0;
  for (std::uint64_t xmask = 0; xmask < (std::uint64_t{1} << nx); ++xmask) {
    double base = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      if ((xmask >> i) & 1U) base += obj[static_cast<std::size_t>(lp.x_col(i))];
    }
    for (std::size_t zi = 0; zi < lp.fail_vars.size(); ++zi) {
      if ((xmask >> lp.fail_owner[zi]) & 1U) base += obj[static_cast<std::size_t>(lp.z_col(zi))];
    }
    std::vector<std::size_t> open_y;
    for (std::size_t yi = 0; yi < lp.live_vars.size(); ++yi) {
      if ((xmask >> lp.live_owner[yi]) & 1U) open_y.push_back(yi);
    }
    if (open_y.size() >= 63 || spent + (std::uint64_t{1} << open_y.size()) > budget) {
      throw LimitExceededError("ILP enumeration exceeds its budget");
    }
    std::vector<std::uint8_t> y(lp.live_vars.size(), 0);
    for (std::uint64_t ymask = 0; ymask < (std::uint64_t{1} << open_y.size()); ++ymask) {
      ++spent;
      double cost = base;
      for (std::size_t k = 0; k < open_y.size(); ++k) {
        y[open_y[k]] = (ymask >> k) & 1U;
        if (y[open_y[k]]) cost += obj[static_cast<std::size_t>(lp.y_col(open_y[k]))];
      }
      if (!(cost < best)) continue;
      bool feasible = std::all_of(cover_members.begin(), cover_members.end(), [&](const auto& ys) {
        return std::any_of(ys.begin(), ys.end(), [&](std::size_t yi) { return y[yi] != 0; });
      });
      if (feasible) best = cost;
    }
    for (std::size_t yi : open_y) y[yi] = 0;
  }
  if (best == kInfinity) throw InfeasibleError(InfeasibleReason::lp_infeasible, "the 0/1 program is infeasible");
  return best + lp.constant;
}

LimitationInstance make_limitation_instance(LimitationKind kind, const LimitationParams& params) {
  LimitationInstance inst;
  const std::size_t k = params.k;
  if (kind == LimitationKind::pooled_leaves) {
    if (k < 2) throw InvalidInputError("pooled_leaves needs at least two leaves");
    // r = 0, hub = 1, leaves 2..k+1, decoy y = k+2, bridge g = k+3.
    const auto n = k + 4;
    const auto hub = NodeId{1};
    const auto decoy = static_cast<NodeId>(k + 2);
    const auto bridge = static_cast<NodeId>(k + 3);
    inst.graph = Graph(n);
    inst.graph.add_edge(0, hub, params.prob);
    std::vector<Arc> truth{{0, hub}};
    std::vector<NodeId> pool;
    for (std::size_t i = 0; i < k; ++i) {
      auto leaf = static_cast<NodeId>(2 + i);
      inst.graph.add_edge(hub, leaf, params.prob);
      truth.emplace_back(hub, leaf);
      pool.push_back(leaf);
    }
    inst.graph.add_edge(0, bridge, params.prob);
    inst.graph.add_edge(bridge, decoy, params.prob);
    pool.push_back(decoy);
    inst.pools.pools = {pool};
    inst.pools.pool_size = pool.size();
    inst.pools.pool_ratio = static_cast<double>(pool.size()) / static_cast<double>(n);
    inst.ground_truth = Cascade::single_seed(0, std::move(truth));
    inst.root = 0;
  } else {
    if (k < 3) throw InvalidInputError("noisy_spider needs a path of at least three nodes");
    // u = 0, v_i = i (1-based), w_ij = k + 1 + (i-1)k + (j-1).
    const auto n = 1 + k + k * k;
    auto v = [](std::size_t i) { return static_cast<NodeId>(i); };
    auto w = [k](std::size_t i, std::size_t j) { return static_cast<NodeId>(k + 1 + (i - 1) * k + (j - 1)); };
    inst.graph = Graph(n);
    inst.central = 0;
    std::vector<Arc> truth;
    for (std::size_t i = 1; i < k; ++i) {
      inst.graph.add_edge(v(i), v(i + 1), params.path_prob);
      truth.emplace_back(v(i), v(i + 1));
    }
    for (std::size_t i = 1; i <= k; ++i) {
      inst.path_nodes.push_back(v(i));
      inst.graph.add_edge(0, w(i, 1), params.prob);
      for (std::size_t j = 1; j < k; ++j) inst.graph.add_edge(w(i, j), w(i, j + 1), params.prob);
      inst.graph.add_edge(w(i, k), v(i), params.prob);
      for (std::size_t j = 1; j <= k; ++j) inst.spoke_nodes.push_back(w(i, j));
      inst.pools.pools.push_back({v(i), w(i, k)});
    }
    inst.pools.pool_size = 2;
    inst.pools.pool_ratio = static_cast<double>(2 * k) / static_cast<double>(n);
    inst.ground_truth = Cascade::single_seed(v(1), std::move(truth));
    inst.root = v(1);
  }
  inst.costs = compute_costs(inst.graph);
  return inst;
}

double spider_bad_event_probability(std::size_t k, double q_fn) {
  if (k < 2) return 0.0;
  double keep = 1.0 - q_fn;
  return keep * keep * (1.0 - std::pow(keep, static_cast<double>(k - 2)));
}

}  // namespace poolcascade
