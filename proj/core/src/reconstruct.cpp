#include "poolcascade/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "poolcascade/errors.hpp"
#include "poolcascade/steiner.hpp"

namespace poolcascade {

GstWeights pool_gst_weights(const Graph& g, const CostModel& cm, AssumptionPolicy policy) {
  if (cm.inclusion.size() != g.num_edges() || cm.exclusion.size() != g.num_edges()) {
    throw InvalidInputError("cost model does not match the graph");
  }
  if (!check_assumption(cm)) {
    if (policy == AssumptionPolicy::enforce) {
      throw AssumptionViolation(fmt::format("some edge probability exceeds 1/2 (max {:.6g})", g.max_probability()));
    }
    spdlog::warn("some edge probability exceeds 1/2; clamping negative edge weights to zero");
  }
  GstWeights w;
  w.node.assign(g.num_nodes(), 0.0);
  w.edge.assign(g.num_edges(), 0.0);
  for (std::size_t u = 0; u < g.num_nodes(); ++u) {
    std::vector<double> terms;
    for (const auto& inc : g.incident(static_cast<NodeId>(u))) terms.push_back(cm.d(inc.edge));
    std::sort(terms.begin(), terms.end());
    for (double t : terms) w.node[u] += t;
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    w.edge[e] = std::max(0.0, cm.c(static_cast<EdgeId>(e)) - cm.d(static_cast<EdgeId>(e)));
  }
  return w;
}

namespace {

void check_observation(const PoolSet& ps, const Observation& obs, const Graph& g) {
  if (obs.size() != ps.size()) {
    throw InvalidInputError(fmt::format("observation has {} outcomes for {} pools", obs.size(), ps.size()));
  }
  for (const auto& pool : ps.pools) {
    for (NodeId v : pool) {
      if (!g.contains(v)) throw InvalidInputError(fmt::format("pool member {} not in graph", v));
    }
  }
}

ReconstructionResult solve_groups(const Graph& g, const CostModel& cm, NodeId root, const GstWeights& w,
                                  const NodeMask& s0, const std::vector<std::vector<NodeId>>& groups,
                                  int level) {
  if (s0[static_cast<std::size_t>(root)]) {
    throw InfeasibleError(InfeasibleReason::root_in_negative_pool,
                          fmt::format("root {} belongs to a negative pool", g.label(root)));
  }
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    bool any = std::any_of(groups[gi].begin(), groups[gi].end(),
                           [&](NodeId v) { return !s0[static_cast<std::size_t>(v)]; });
    if (!any) {
      throw InfeasibleError(InfeasibleReason::unreachable_pool,
                            fmt::format("positive group {} lies entirely inside negative pools", gi));
    }
  }
  GroupSteinerResult gst = group_steiner_tree(g, w.node, w.edge, root, groups, level, &s0);
  ReconstructionResult out;
  out.cascade = Cascade::single_seed(root, gst.tree_arcs);
  out.cost = cascade_cost(out.cascade, g, cm, s0);
  out.gst_weight = gst.weight;
  return out;
}

std::vector<std::vector<NodeId>> positive_groups(const PoolSet& ps, const Observation& obs) {
  std::vector<std::vector<NodeId>> groups;
  for (int i : obs.gamma1()) groups.push_back(ps.pools[static_cast<std::size_t>(i)]);
  return groups;
}

}  // namespace

ReconstructionResult approx_cascade(const Graph& g, const CostModel& cm, NodeId root, const PoolSet& ps,
                                    const Observation& obs, const ReconstructOptions& options) {
  if (!g.contains(root)) throw InvalidInputError(fmt::format("root {} not in graph", root));
  check_observation(ps, obs, g);
  GstWeights w = pool_gst_weights(g, cm, options.assumption);
  NodeMask s0 = negative_mask(ps, obs, g.num_nodes());
  ReconstructionResult out = solve_groups(g, cm, root, w, s0, positive_groups(ps, obs), options.level);
  out.outcome_used = obs;
  return out;
}

ReconstructionResult approx_cascade_all_roots(const Graph& g, const CostModel& cm, const PoolSet& ps,
                                              const Observation& obs, const ReconstructOptions& options) {
  check_observation(ps, obs, g);
  GstWeights w = pool_gst_weights(g, cm, options.assumption);
  NodeMask s0 = negative_mask(ps, obs, g.num_nodes());
  auto groups = positive_groups(ps, obs);
  std::optional<ReconstructionResult> best;
  for (std::size_t r = 0; r < g.num_nodes(); ++r) {
    if (s0[r]) continue;
    try {
      ReconstructionResult res = solve_groups(g, cm, static_cast<NodeId>(r), w, s0, groups, options.level);
      if (!best || res.cost.total < best->cost.total) best = std::move(res);
    } catch (const InfeasibleError&) {
    }
  }
  if (!best) {
    throw InfeasibleError(InfeasibleReason::no_consistent_cascade, "no root admits a consistent tree");
  }
  best->outcome_used = obs;
  return *best;
}

double outcome_penalty(bool observed_positive, bool actual_positive, const NoiseModel& nm) {
  double p;
  if (actual_positive) {
    p = observed_positive ? 1.0 - nm.false_negative : nm.false_negative;
  } else {
    p = observed_positive ? nm.false_positive : 1.0 - nm.false_positive;
  }
  return p <= 0.0 ? kInfinity : -std::log(p);
}

double hypothesis_penalty(const Observation& observed, const Observation& actual, const NoiseModel& nm) {
  if (observed.size() != actual.size()) throw InvalidInputError("outcome vectors differ in length");
  std::vector<double> terms;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    terms.push_back(outcome_penalty(observed.positive[i], actual.positive[i], nm));
  }
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

namespace {

struct NoisySearch {
  const Graph& g;
  const CostModel& cm;
  NodeId root;
  const PoolSet& ps;
  const Observation& observed;
  const NoiseModel& nm;
  GstWeights w;
  int level;

  std::optional<ReconstructionResult> best;
  double best_total = kInfinity;
  std::size_t evaluated = 0;

  void evaluate(const Observation& actual, double penalty) {
    ++evaluated;
    NodeMask s0 = negative_mask(ps, actual, g.num_nodes());
    try {
      ReconstructionResult res = solve_groups(g, cm, root, w, s0, positive_groups(ps, actual), level);
      double total = res.cost.total + penalty;
      if (total < best_total) {
        best_total = total;
        res.outcome_used = actual;
        res.noisy_penalty = penalty;
        best = std::move(res);
      }
    } catch (const InfeasibleError&) {
    }
  }
};

}  // namespace

ReconstructionResult approx_cascade_noisy(const Graph& g, const CostModel& cm, NodeId root, const PoolSet& ps,
                                          const Observation& obs, const NoiseModel& nm,
                                          const NoisyOptions& options) {
  nm.validate();
  if (!g.contains(root)) throw InvalidInputError(fmt::format("root {} not in graph", root));
  check_observation(ps, obs, g);
  const std::size_t m = ps.size();
  NoisySearch search{g, cm, root, ps, obs, nm, pool_gst_weights(g, cm, options.base.assumption),
                     options.base.level, std::nullopt, kInfinity, 0};

  std::vector<double> keep(m), flip(m);
  for (std::size_t i = 0; i < m; ++i) {
    keep[i] = outcome_penalty(obs.positive[i], obs.positive[i], nm);
    flip[i] = outcome_penalty(obs.positive[i], !obs.positive[i], nm);
  }

  bool exhaustive = true;
  if (!options.prune) {
    if (m > options.max_pools) {
      throw LimitExceededError(
          fmt::format("{} pools exceed the exhaustive noisy cap of {}; enable pruning", m, options.max_pools));
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      Observation actual = obs;
      std::vector<double> terms;
      bool possible = true;
      for (std::size_t i = 0; i < m; ++i) {
        bool flipped = (mask >> i) & 1U;
        double t = flipped ? flip[i] : keep[i];
        if (t == kInfinity) {
          possible = false;
          break;
        }
        if (flipped) actual.positive[i] = !actual.positive[i];
        terms.push_back(t);
      }
      if (!possible) continue;
      std::sort(terms.begin(), terms.end());
      double penalty = 0.0;
      for (double t : terms) penalty += t;
      search.evaluate(actual, penalty);
    }
  } else {
    // Start from the most likely outcome, then visit toggle sets in
    // nondecreasing order of added penalty.
    Observation base = obs;
    double base_penalty = 0.0;
    std::vector<std::pair<double, std::size_t>> toggles;
    for (std::size_t i = 0; i < m; ++i) {
      if (flip[i] < keep[i]) base.positive[i] = !base.positive[i];
      base_penalty += std::min(keep[i], flip[i]);
      double delta = std::abs(flip[i] - keep[i]);
      if (std::isfinite(delta)) toggles.emplace_back(delta, i);
    }
    std::sort(toggles.begin(), toggles.end());

    struct Node {
      double extra;
      std::vector<std::size_t> chosen;  // indices into toggles, increasing
      bool operator>(const Node& o) const { return extra > o.extra; }
    };
    std::priority_queue<Node, std::vector<Node>, std::greater<>> frontier;
    frontier.push({0.0, {}});
    while (!frontier.empty()) {
      Node cur = frontier.top();
      frontier.pop();
      double penalty = base_penalty + cur.extra;
      if (penalty >= search.best_total) break;
      if (search.evaluated >= options.max_hypotheses) {
        exhaustive = false;
        break;
      }
      Observation actual = base;
      for (std::size_t t : cur.chosen) {
        std::size_t pool = toggles[t].second;
        actual.positive[pool] = !actual.positive[pool];
      }
      search.evaluate(actual, hypothesis_penalty(obs, actual, nm));

      std::size_t next = cur.chosen.empty() ? 0 : cur.chosen.back() + 1;
      if (next < toggles.size()) {
        Node extend = cur;
        extend.chosen.push_back(next);
        extend.extra += toggles[next].first;
        frontier.push(std::move(extend));
        if (!cur.chosen.empty()) {
          Node shift = cur;
          shift.extra += toggles[next].first - toggles[next - 1].first;
          shift.chosen.back() = next;
          frontier.push(std::move(shift));
        }
      }
    }
  }

  if (!search.best) {
    throw InfeasibleError(InfeasibleReason::no_consistent_cascade,
                          "no hypothesised outcome admits a consistent tree");
  }
  ReconstructionResult out = std::move(*search.best);
  out.hypotheses_evaluated = search.evaluated;
  out.exhaustive = exhaustive;
  return out;
}

ReconstructionResult baseline_random(const Graph& g, const CostModel& cm, NodeId root, const PoolSet& ps,
                                     const Observation& obs, Rng& rng, const ReconstructOptions& options) {
  check_observation(ps, obs, g);
  PoolSet reduced;
  Observation reduced_obs;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& pool = ps.pools[i];
    if (obs.positive[i]) {
      if (pool.empty()) throw InvalidInputError(fmt::format("positive pool {} is empty", i));
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      reduced.pools.push_back({pool[pick(rng)]});
    } else {
      reduced.pools.push_back(pool);
    }
    reduced_obs.positive.push_back(obs.positive[i]);
  }
  ReconstructionResult out = approx_cascade(g, cm, root, reduced, reduced_obs, options);
  out.outcome_used = obs;
  return out;
}

ReconstructionResult baseline_all(const Graph& g, const CostModel& cm, NodeId root, const PoolSet& ps,
                                  const Observation& obs, const ReconstructOptions& options) {
  check_observation(ps, obs, g);
  NodeMask s0 = negative_mask(ps, obs, g.num_nodes());
  PoolSet expanded;
  Observation expanded_obs;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!obs.positive[i]) {
      expanded.pools.push_back(ps.pools[i]);
      expanded_obs.positive.push_back(false);
      continue;
    }
    std::size_t added = 0;
    for (NodeId v : ps.pools[i]) {
      if (s0[static_cast<std::size_t>(v)]) continue;
      expanded.pools.push_back({v});
      expanded_obs.positive.push_back(true);
      ++added;
    }
    if (added == 0) {
      throw InfeasibleError(InfeasibleReason::unreachable_pool,
                            fmt::format("positive pool {} lies entirely inside negative pools", i));
    }
  }
  ReconstructionResult out = approx_cascade(g, cm, root, expanded, expanded_obs, options);
  out.outcome_used = obs;
  return out;
}

}  // namespace poolcascade
