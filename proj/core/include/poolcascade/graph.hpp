#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

namespace poolcascade {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;
using Rng = std::mt19937_64;

/// Byte mask over node ids; nonzero means "member".
using NodeMask = std::vector<std::uint8_t>;

NodeMask make_mask(std::size_t num_nodes, std::span<const NodeId> members);

inline constexpr double kUnsetProbability = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double prob = kUnsetProbability;
  /// Contact duration in seconds; only used to derive prob.
  std::optional<double> duration;

  NodeId other(NodeId x) const { return x == u ? v : u; }
};

struct Incidence {
  NodeId neighbor;
  EdgeId edge;
};

/// Undirected contact network with per-edge transmission probability.
///
/// Nodes are dense 0..n-1. Each node also carries an external label (the id
/// used in input files); labels default to the node index.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t num_nodes);

  std::size_t num_nodes() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  /// Adds the undirected edge {u, v}. Returns the existing id if present.
  /// Throws InvalidInputError on self-loops or out-of-range endpoints.
  EdgeId add_edge(NodeId u, NodeId v, double prob = kUnsetProbability);

  const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Incidence> incident(NodeId v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  std::size_t degree(NodeId v) const { return adjacency_[static_cast<std::size_t>(v)].size(); }

  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const;
  /// Probability of edge {u, v}; throws if the edge is absent.
  double prob(NodeId u, NodeId v) const;

  /// p must lie in [0, 1].
  void set_probability(EdgeId e, double p);
  void set_duration(EdgeId e, double duration);
  void set_homogeneous_probability(double p);
  /// p_e = 1 - exp(-beta * duration) for every edge; all durations must be set.
  void set_probability_from_duration(double beta);
  bool has_all_probabilities() const;
  double max_probability() const;

  std::int64_t label(NodeId v) const;
  std::optional<NodeId> node_of_label(std::int64_t label) const;
  void set_labels(std::vector<std::int64_t> labels);

  bool contains(NodeId v) const { return v >= 0 && static_cast<std::size_t>(v) < num_nodes(); }

 private:
  static std::uint64_t key(NodeId u, NodeId v);

  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::unordered_map<std::uint64_t, EdgeId> edge_index_;
  std::vector<std::int64_t> labels_;
  std::unordered_map<std::int64_t, NodeId> label_index_;
};

/// Per-edge inclusion/exclusion costs and per-node seeding costs, in nats.
struct CostModel {
  std::vector<double> inclusion;   // c_e = -ln p_e
  std::vector<double> exclusion;   // d_e = -ln(1 - p_e)
  std::vector<double> seeding;     // a_v = -ln p0_v (empty unless seeding probabilities given)
  std::vector<double> nonseeding;  // b_v = -ln(1 - p0_v)

  double c(EdgeId e) const { return inclusion[static_cast<std::size_t>(e)]; }
  double d(EdgeId e) const { return exclusion[static_cast<std::size_t>(e)]; }
  double a(NodeId v) const { return seeding[static_cast<std::size_t>(v)]; }
  double b(NodeId v) const { return nonseeding[static_cast<std::size_t>(v)]; }
};

enum class EdgeWeightMode { probability, duration };

/// Parses "u v x" lines ('#' starts a comment). Labels are compacted to
/// 0..n-1 in ascending label order; Graph::label maps back.
Graph read_edge_list(std::istream& in, EdgeWeightMode mode, std::optional<double> beta = std::nullopt);
Graph load_edge_list(const std::filesystem::path& path, EdgeWeightMode mode,
                     std::optional<double> beta = std::nullopt);
/// Writes "u v p" lines using node labels.
void write_edge_list(std::ostream& out, const Graph& g);

/// Preferential attachment seeded with an m-node star; node t >= m attaches
/// to m distinct earlier nodes chosen proportionally to degree.
Graph generate_ba(std::size_t n, std::size_t m, Rng& rng);
/// Erdos-Renyi G(n, q).
Graph generate_gnq(std::size_t n, double q, Rng& rng);

/// Throws InvalidInputError if some p_e is outside (0, 1) or p0_v outside [0, 1).
/// p0_v = 0 yields a_v = +infinity.
CostModel compute_costs(const Graph& g, std::optional<std::span<const double>> seed_probs = std::nullopt);
CostModel compute_costs_from_probabilities(std::span<const double> edge_probs,
                                           std::optional<std::span<const double>> seed_probs = std::nullopt);

/// True iff c_e >= d_e for every edge, i.e. every p_e <= 1/2.
bool check_assumption(const CostModel& cm);

}  // namespace poolcascade
