#include "poolcascade/cost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "poolcascade/errors.hpp"

namespace poolcascade {

namespace {

// Addends are nonnegative; summing in ascending order keeps the rounding
// error proportional to the result.
double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

double sum_over(std::span<const EdgeId> edges, const std::vector<double>& per_edge) {
  std::vector<double> terms;
  terms.reserve(edges.size());
  for (EdgeId e : edges) terms.push_back(per_edge[static_cast<std::size_t>(e)]);
  return sorted_sum(terms);
}

void require_single_seed(const Cascade& c) {
  if (c.kind() != CascadeKind::single_seed) {
    throw InvalidInputError("expected a single-seed cascade");
  }
}

}  // namespace

std::string CostBreakdown::csv_header() { return "inclusion,boundary_s0,boundary_out,chord,total"; }

std::string CostBreakdown::csv_row() const {
  return fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}", inclusion, boundary_s0, boundary_out, chord, total);
}

std::string OneHopCostBreakdown::csv_header() { return "seed_cost,nonseed_cost,live_cost,failed_cost,total"; }

std::string OneHopCostBreakdown::csv_row() const {
  return fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}", seed_cost, nonseed_cost, live_cost, failed_cost,
                     total);
}

std::vector<EdgeId> tree_edges(const Cascade& c, const Graph& g) {
  require_single_seed(c);
  std::vector<EdgeId> out;
  out.reserve(c.arcs().size());
  for (const auto& [u, v] : c.arcs()) {
    auto e = g.find_edge(u, v);
    if (!e) {
      throw InvalidInputError(fmt::format("cascade arc ({}, {}) is not an edge of the graph", u, v));
    }
    out.push_back(*e);
  }
  return out;
}

BoundarySets boundary_sets(const Cascade& c, const Graph& g, const NodeMask& s0) {
  require_single_seed(c);
  if (s0.size() != g.num_nodes()) {
    throw InvalidInputError("negative-node mask has the wrong size");
  }
  NodeMask in_tree(g.num_nodes(), 0);
  for (NodeId v : c.infected()) {
    if (!g.contains(v)) throw InvalidInputError(fmt::format("cascade node {} not in graph", v));
    if (s0[static_cast<std::size_t>(v)]) {
      throw InvalidInputError(fmt::format("cascade contains node {} from a negative pool", v));
    }
    in_tree[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<std::uint8_t> is_tree_edge(g.num_edges(), 0);
  for (EdgeId e : tree_edges(c, g)) is_tree_edge[static_cast<std::size_t>(e)] = 1;

  BoundarySets sets;
  for (NodeId u : c.infected()) {
    for (const auto& inc : g.incident(u)) {
      if (is_tree_edge[static_cast<std::size_t>(inc.edge)]) continue;
      NodeId w = inc.neighbor;
      if (s0[static_cast<std::size_t>(w)]) {
        sets.to_negative.push_back(inc.edge);
      } else if (in_tree[static_cast<std::size_t>(w)]) {
        if (u < w) sets.chords.push_back(inc.edge);
      } else {
        sets.outgoing.push_back(inc.edge);
      }
    }
  }
  return sets;
}

CostBreakdown cascade_cost(const Cascade& c, const Graph& g, const CostModel& cm, const NodeMask& s0) {
  BoundarySets sets = boundary_sets(c, g, s0);
  std::vector<EdgeId> tree = tree_edges(c, g);
  CostBreakdown out;
  out.inclusion = sum_over(tree, cm.inclusion);
  out.boundary_s0 = sum_over(sets.to_negative, cm.exclusion);
  out.boundary_out = sum_over(sets.outgoing, cm.exclusion);
  out.chord = sum_over(sets.chords, cm.exclusion);
  std::vector<double> parts{out.inclusion, out.boundary_s0, out.boundary_out, out.chord};
  out.total = sorted_sum(parts);
  return out;
}

double cascade_log_probability(const Cascade& c, const Graph& g, const CostModel& cm, const NodeMask& s0) {
  require_single_seed(c);
  if (!c.has_depth()) {
    throw InvalidInputError("cascade has no depth map");
  }
  BoundarySets sets = boundary_sets(c, g, s0);
  std::vector<EdgeId> unequal;
  for (EdgeId e : sets.chords) {
    const Edge& edge = g.edge(e);
    if (c.depth().at(edge.u) != c.depth().at(edge.v)) unequal.push_back(e);
  }
  std::vector<double> parts{sum_over(tree_edges(c, g), cm.inclusion), sum_over(sets.to_negative, cm.exclusion),
                            sum_over(sets.outgoing, cm.exclusion), sum_over(unequal, cm.exclusion)};
  return -sorted_sum(parts);
}

OneHopCostBreakdown one_hop_cost(const Cascade& c, const BipartiteExpansion& bip, const CostModel& cm) {
  if (c.kind() != CascadeKind::one_hop) {
    throw InvalidInputError("expected a one-hop cascade");
  }
  NodeMask seeded(bip.num_nodes(), 0);
  for (NodeId s : c.seeds()) {
    if (!bip.is_source(s)) throw InvalidInputError(fmt::format("seed {} is not a source node", s));
    seeded[static_cast<std::size_t>(s)] = 1;
  }
  std::vector<std::uint8_t> live(bip.num_arcs(), 0);
  for (const auto& [from, to] : c.arcs()) {
    if (!bip.is_source(from) || !seeded[static_cast<std::size_t>(from)]) {
      throw InvalidInputError(fmt::format("live edge ({}, {}) has an unseeded origin", from, to));
    }
    int found = -1;
    for (int a : bip.out_arcs(from)) {
      if (bip.arc(a).target == to) {
        found = a;
        break;
      }
    }
    if (found < 0) throw InvalidInputError(fmt::format("live edge ({}, {}) is not an arc", from, to));
    live[static_cast<std::size_t>(found)] = 1;
  }

  std::vector<double> seed_terms, nonseed_terms, live_terms, failed_terms;
  for (std::size_t s = 0; s < bip.num_sources(); ++s) {
    if (seeded[s]) {
      seed_terms.push_back(cm.seeding[s]);
      for (int a : bip.out_arcs(static_cast<NodeId>(s))) {
        auto ai = static_cast<std::size_t>(a);
        if (live[ai]) {
          live_terms.push_back(cm.inclusion[ai]);
        } else {
          failed_terms.push_back(cm.exclusion[ai]);
        }
      }
    } else {
      nonseed_terms.push_back(cm.nonseeding[s]);
    }
  }
  OneHopCostBreakdown out;
  out.seed_cost = sorted_sum(seed_terms);
  out.nonseed_cost = sorted_sum(nonseed_terms);
  out.live_cost = sorted_sum(live_terms);
  out.failed_cost = sorted_sum(failed_terms);
  std::vector<double> parts{out.seed_cost, out.nonseed_cost, out.live_cost, out.failed_cost};
  out.total = sorted_sum(parts);
  return out;
}

CostModel compute_one_hop_costs(const BipartiteExpansion& bip, std::span<const double> source_seed_probs) {
  if (source_seed_probs.size() != bip.num_sources()) {
    throw InvalidInputError("need one seeding probability per source");
  }
  std::vector<double> seed_probs(bip.num_nodes(), 0.0);
  std::copy(source_seed_probs.begin(), source_seed_probs.end(), seed_probs.begin());
  auto probs = bip.arc_probabilities();
  return compute_costs_from_probabilities(probs, std::span<const double>(seed_probs));
}

CostModel compute_one_hop_costs(const BipartiteExpansion& bip, double p0) {
  std::vector<double> probs(bip.num_sources(), p0);
  return compute_one_hop_costs(bip, probs);
}

}  // namespace poolcascade
