#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "poolcascade/graph.hpp"

namespace poolcascade {

enum class Method { approx, approx_random, approx_all, round, round_random };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);
bool is_one_hop(Method m);

struct NetworkSpec {
  enum class Kind { ba, gnq, edge_list };
  Kind kind = Kind::ba;
  std::size_t n = 1000;
  std::size_t m = 3;
  double q = 0.02;
  std::string path;
  EdgeWeightMode weight_mode = EdgeWeightMode::probability;

  std::string describe() const;
};

inline constexpr std::string_view kConfigSchema = "poolcascade.experiment/1";
inline constexpr std::string_view kMetricsSchema = "poolcascade.metrics/1";

struct ExperimentConfig {
  NetworkSpec network;
  /// Homogeneous edge probabilities. Empty: use the network's own (edge-list
  /// probabilities, or beta for duration networks).
  std::vector<double> probabilities{0.01, 0.05, 0.10, 0.20};
  /// Transmissibility for duration-weighted edge lists: p_e = 1 - exp(-beta d).
  std::vector<double> betas;
  /// Seeding probabilities for the one-hop methods.
  std::vector<double> seed_probabilities{0.01, 0.05, 0.10};
  std::vector<double> pool_ratios{0.5, 0.9};
  std::vector<std::size_t> pool_sizes{3, 5, 7, 9};
  std::vector<Method> methods{Method::approx, Method::approx_random, Method::approx_all};
  std::size_t replicates = 50;
  std::uint64_t base_seed = 1;
  int level = 2;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::size_t max_redraws = 1000;
  bool record_time = false;

  /// Throws InvalidInputError on empty grids or zero replicates.
  void validate() const;
};

/// Flat "key = value" text; lists are comma separated; '#' comments. The
/// first setting must be `schema = poolcascade.experiment/1`.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
void write_config(std::ostream& out, const ExperimentConfig& cfg);

struct GridPoint {
  bool one_hop = false;
  /// Homogeneous p or beta, depending on the network; NaN when the file's own
  /// probabilities are used.
  double diffusion = 0.0;
  double seed_prob = 0.0;
  double pool_ratio = 0.0;
  std::size_t pool_size = 0;

  std::string key() const;
};

enum class RowStatus { ok, infeasible, error };

struct MetricRow {
  GridPoint point;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  Method method = Method::approx;
  RowStatus status = RowStatus::ok;
  std::string status_detail;
  std::size_t redraws = 0;
  std::size_t num_nodes = 0;
  std::size_t positive_pools = 0;
  std::size_t num_pools = 0;
  std::size_t truth_size = 0;
  std::size_t reconstructed_size = 0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double f1 = 0.0;
  double e_rel = 0.0;
  double cost = 0.0;
  double wall_time_s = 0.0;
};

std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg);

/// seed = base_seed XOR stable_hash(grid point, replicate).
std::uint64_t replicate_seed(std::uint64_t base_seed, const GridPoint& point, std::size_t replicate);
std::uint64_t stable_hash(std::string_view text);

/// Runs every grid point x replicate x method and hands rows to `sink` in
/// (grid point, replicate, method) order.
void run_experiment(const ExperimentConfig& cfg, const std::function<void(const MetricRow&)>& sink);
std::vector<MetricRow> run_experiment(const ExperimentConfig& cfg);

std::string metrics_csv_header(bool with_time);
std::string metrics_csv_row(const MetricRow& row, bool with_time);
/// Schema comment line, header, then one line per row.
void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows, bool with_time);

/// Builds the configured network (without per-grid-point probabilities).
Graph build_network(const NetworkSpec& spec, std::uint64_t base_seed);

}  // namespace poolcascade
