#include "poolcascade/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "poolcascade/errors.hpp"

namespace poolcascade {

NodeMask make_mask(std::size_t num_nodes, std::span<const NodeId> members) {
  NodeMask mask(num_nodes, 0);
  for (NodeId v : members) {
    if (v < 0 || static_cast<std::size_t>(v) >= num_nodes) {
      throw InvalidInputError(fmt::format("node {} out of range [0, {})", v, num_nodes));
    }
    mask[static_cast<std::size_t>(v)] = 1;
  }
  return mask;
}

Graph::Graph(std::size_t num_nodes) : adjacency_(num_nodes) {}

std::uint64_t Graph::key(NodeId u, NodeId v) {
  auto lo = static_cast<std::uint64_t>(std::min(u, v));
  auto hi = static_cast<std::uint64_t>(std::max(u, v));
  return (lo << 32) | hi;
}

EdgeId Graph::add_edge(NodeId u, NodeId v, double prob) {
  if (!contains(u) || !contains(v)) {
    throw InvalidInputError(fmt::format("edge ({}, {}) has an endpoint outside [0, {})", u, v, num_nodes()));
  }
  if (u == v) {
    throw InvalidInputError(fmt::format("self-loop at node {}", u));
  }
  if (auto it = edge_index_.find(key(u, v)); it != edge_index_.end()) {
    return it->second;
  }
  auto id = static_cast<EdgeId>(edges_.size());
  edges_.push_back(Edge{u, v, kUnsetProbability, std::nullopt});
  if (!std::isnan(prob)) {
    set_probability(id, prob);
  }
  adjacency_[static_cast<std::size_t>(u)].push_back({v, id});
  adjacency_[static_cast<std::size_t>(v)].push_back({u, id});
  edge_index_.emplace(key(u, v), id);
  return id;
}

std::optional<EdgeId> Graph::find_edge(NodeId u, NodeId v) const {
  if (auto it = edge_index_.find(key(u, v)); it != edge_index_.end()) {
    return it->second;
  }
  return std::nullopt;
}

double Graph::prob(NodeId u, NodeId v) const {
  auto e = find_edge(u, v);
  if (!e) {
    throw InvalidInputError(fmt::format("no edge ({}, {})", u, v));
  }
  return edge(*e).prob;
}

void Graph::set_probability(EdgeId e, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidInputError(fmt::format("edge probability {} outside [0, 1]", p));
  }
  edges_[static_cast<std::size_t>(e)].prob = p;
}

void Graph::set_duration(EdgeId e, double duration) {
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw InvalidInputError(fmt::format("contact duration {} must be finite and nonnegative", duration));
  }
  edges_[static_cast<std::size_t>(e)].duration = duration;
}

void Graph::set_homogeneous_probability(double p) {
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    set_probability(static_cast<EdgeId>(e), p);
  }
}

void Graph::set_probability_from_duration(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw InvalidInputError(fmt::format("beta {} must be finite and nonnegative", beta));
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& duration = edges_[e].duration;
    if (!duration) {
      throw InvalidInputError(fmt::format("edge ({}, {}) has no contact duration", edges_[e].u, edges_[e].v));
    }
    // -expm1(-x) = 1 - exp(-x) without cancellation for small beta * duration
    set_probability(static_cast<EdgeId>(e), -std::expm1(-beta * *duration));
  }
}

bool Graph::has_all_probabilities() const {
  return std::none_of(edges_.begin(), edges_.end(), [](const Edge& e) { return std::isnan(e.prob); });
}

double Graph::max_probability() const {
  double best = 0.0;
  for (const auto& e : edges_) best = std::max(best, e.prob);
  return best;
}

std::int64_t Graph::label(NodeId v) const {
  if (labels_.empty()) return v;
  return labels_[static_cast<std::size_t>(v)];
}

std::optional<NodeId> Graph::node_of_label(std::int64_t label) const {
  if (labels_.empty()) {
    if (label >= 0 && static_cast<std::size_t>(label) < num_nodes()) return static_cast<NodeId>(label);
    return std::nullopt;
  }
  if (auto it = label_index_.find(label); it != label_index_.end()) return it->second;
  return std::nullopt;
}

void Graph::set_labels(std::vector<std::int64_t> labels) {
  if (labels.size() != num_nodes()) {
    throw InvalidInputError("label count does not match node count");
  }
  label_index_.clear();
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (!label_index_.emplace(labels[v], static_cast<NodeId>(v)).second) {
      throw InvalidInputError(fmt::format("duplicate node label {}", labels[v]));
    }
  }
  labels_ = std::move(labels);
}

namespace {

struct RawEdge {
  std::int64_t u;
  std::int64_t v;
  double value;
  std::size_t line;
};

}  // namespace

Graph read_edge_list(std::istream& in, EdgeWeightMode mode, std::optional<double> beta) {
  if (mode == EdgeWeightMode::duration && !beta) {
    throw InvalidInputError("duration mode requires beta");
  }
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    std::istringstream restart(line);
    RawEdge e{0, 0, 0.0, line_no};
    std::string extra;
    if (!(restart >> e.u >> e.v >> e.value) || (restart >> extra)) {
      throw InvalidInputError(fmt::format("line {}: expected \"u v x\"", line_no));
    }
    if (e.u < 0 || e.v < 0) {
      throw InvalidInputError(fmt::format("line {}: node ids must be nonnegative", line_no));
    }
    if (e.u == e.v) {
      throw InvalidInputError(fmt::format("line {}: self-loop at node {}", line_no, e.u));
    }
    raw.push_back(e);
  }

  std::vector<std::int64_t> labels;
  labels.reserve(raw.size() * 2);
  for (const auto& e : raw) {
    labels.push_back(e.u);
    labels.push_back(e.v);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  Graph g(labels.size());
  g.set_labels(labels);
  for (const auto& e : raw) {
    NodeId u = *g.node_of_label(e.u);
    NodeId v = *g.node_of_label(e.v);
    double p = e.value;
    if (mode == EdgeWeightMode::duration) {
      if (!(e.value >= 0.0) || !std::isfinite(e.value)) {
        throw InvalidInputError(fmt::format("line {}: contact duration must be nonnegative", e.line));
      }
      p = -std::expm1(-*beta * e.value);
    }
    if (!(p > 0.0 && p < 1.0)) {
      throw InvalidInputError(fmt::format("line {}: edge probability {} outside (0, 1)", e.line, p));
    }
    if (auto existing = g.find_edge(u, v)) {
      if (g.edge(*existing).prob != p) {
        throw InvalidInputError(
            fmt::format("line {}: duplicate edge ({}, {}) with a different value", e.line, e.u, e.v));
      }
      continue;
    }
    EdgeId id = g.add_edge(u, v, p);
    if (mode == EdgeWeightMode::duration) g.set_duration(id, e.value);
  }
  return g;
}

Graph load_edge_list(const std::filesystem::path& path, EdgeWeightMode mode, std::optional<double> beta) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError(fmt::format("cannot open edge list {}", path.string()));
  }
  return read_edge_list(in, mode, beta);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (const auto& e : g.edges()) {
    out << fmt::format("{} {} {:.17g}\n", g.label(e.u), g.label(e.v), e.prob);
  }
}

Graph generate_ba(std::size_t n, std::size_t m, Rng& rng) {
  if (m < 1 || m >= n) {
    throw InvalidInputError(fmt::format("BA generator needs 1 <= m < n (got m={}, n={})", m, n));
  }
  Graph g(n);
  // Each node appears once per incident edge end, so uniform draws from this
  // list are degree-proportional.
  std::vector<NodeId> ends;
  for (std::size_t leaf = 1; leaf < m; ++leaf) {
    g.add_edge(0, static_cast<NodeId>(leaf));
    ends.push_back(0);
    ends.push_back(static_cast<NodeId>(leaf));
  }
  std::vector<NodeId> targets;
  for (std::size_t t = m; t < n; ++t) {
    targets.clear();
    while (targets.size() < m) {
      NodeId pick;
      if (ends.empty()) {
        pick = static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, t - 1)(rng));
      } else {
        pick = ends[std::uniform_int_distribution<std::size_t>(0, ends.size() - 1)(rng)];
      }
      if (std::find(targets.begin(), targets.end(), pick) == targets.end()) targets.push_back(pick);
    }
    for (NodeId target : targets) {
      g.add_edge(static_cast<NodeId>(t), target);
      ends.push_back(static_cast<NodeId>(t));
      ends.push_back(target);
    }
  }
  return g;
}

Graph generate_gnq(std::size_t n, double q, Rng& rng) {
  if (!(q > 0.0 && q < 1.0)) {
    throw InvalidInputError(fmt::format("G(n,q) needs q in (0, 1), got {}", q));
  }
  Graph g(n);
  std::bernoulli_distribution coin(q);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (coin(rng)) g.add_edge(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
  }
  return g;
}

CostModel compute_costs_from_probabilities(std::span<const double> edge_probs,
                                           std::optional<std::span<const double>> seed_probs) {
  CostModel cm;
  cm.inclusion.reserve(edge_probs.size());
  cm.exclusion.reserve(edge_probs.size());
  for (std::size_t e = 0; e < edge_probs.size(); ++e) {
    double p = edge_probs[e];
    if (!(p > 0.0 && p < 1.0)) {
      throw InvalidInputError(fmt::format("edge {} probability {} outside (0, 1)", e, p));
    }
    cm.inclusion.push_back(-std::log(p));
    cm.exclusion.push_back(-std::log1p(-p));
  }
  if (seed_probs) {
    for (std::size_t v = 0; v < seed_probs->size(); ++v) {
      double p = (*seed_probs)[v];
      if (!(p >= 0.0 && p < 1.0)) {
        throw InvalidInputError(fmt::format("node {} seeding probability {} outside [0, 1)", v, p));
      }
      cm.seeding.push_back(p == 0.0 ? kInfinity : -std::log(p));
      cm.nonseeding.push_back(-std::log1p(-p));
    }
  }
  return cm;
}

CostModel compute_costs(const Graph& g, std::optional<std::span<const double>> seed_probs) {
  if (seed_probs && seed_probs->size() != g.num_nodes()) {
    throw InvalidInputError("seeding probabilities must have one entry per node");
  }
  std::vector<double> probs;
  probs.reserve(g.num_edges());
  for (const auto& e : g.edges()) probs.push_back(e.prob);
  return compute_costs_from_probabilities(probs, seed_probs);
}

bool check_assumption(const CostModel& cm) {
  for (std::size_t e = 0; e < cm.inclusion.size(); ++e) {
    // log and log1p may disagree in the last ulp at p = 1/2
    if (cm.inclusion[e] < cm.exclusion[e] - 1e-12) return false;
  }
  return true;
}

}  // namespace poolcascade
