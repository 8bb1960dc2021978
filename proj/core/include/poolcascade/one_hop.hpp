#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "poolcascade/cascade.hpp"
#include "poolcascade/cost.hpp"
#include "poolcascade/graph.hpp"
#include "poolcascade/pooling.hpp"
#include "poolcascade/simplex.hpp"
#include "poolcascade/simulate.hpp"

namespace poolcascade {

/// Relaxed integer program for the one-hop problem.
///
/// Columns are laid out [x..., y..., z...]:
///   x_i  source i is seeded                 cost a_i - b_i
///   y_ij arc (i, j) is live                 cost c_ij
///   z_ij arc (i, j) exists but did not fire cost d_ij
/// Rows: one cover row per positive pool (sum of y into the pool >= 1), a
/// linkage row x_i - y_ij >= 0 per y, and a non-infection row z_ij - x_i >= 0
/// per z. The constant sum_i b_i is kept apart.
///
/// Only sources with an arc into a positive, non-negative-pool target get an x
/// column (others are zero at every optimum), and only arcs into such targets
/// get a y column. Arcs into negative-pool nodes are never live.
struct OneHopLp {
  enum class RowKind { cover, linkage, non_infection };

  std::vector<NodeId> seed_vars;  // x column -> source node
  std::vector<int> live_vars;     // y column -> arc
  std::vector<int> fail_vars;     // z column -> arc
  std::vector<int> fail_owner;    // z column -> x column of its source
  std::vector<int> live_owner;    // y column -> x column of its source
  std::vector<int> live_index_of_arc;  // arc -> y column or -1
  std::vector<int> seed_index_of_node; // node -> x column or -1
  LinearProgram program;
  std::vector<RowKind> row_kinds;
  std::vector<int> cover_pool;    // cover row -> pool index
  double constant = 0.0;          // sum of b over all sources
  std::size_t num_positive_pools = 0;

  int x_col(std::size_t i) const { return static_cast<int>(i); }
  int y_col(std::size_t i) const { return static_cast<int>(seed_vars.size() + i); }
  int z_col(std::size_t i) const { return static_cast<int>(seed_vars.size() + live_vars.size() + i); }

  /// CPLEX LP text format.
  std::string to_lp_format() const;
};

struct LpSolution {
  std::vector<double> x;  // per x column
  std::vector<double> y;  // per y column
  std::vector<double> z;  // per z column
  std::vector<double> duals;  // per row of OneHopLp::program
  /// Includes the constant sum of b.
  double objective = 0.0;
  std::size_t pivots = 0;
};

/// Pools must consist of targets. Throws InfeasibleError(lp_infeasible) when
/// a positive pool has no admissible incoming arc.
OneHopLp build_one_hop_lp(const BipartiteExpansion& bip, const CostModel& cm, const PoolSet& ps,
                          const Observation& obs);

/// Substitutes z_ij = x_i (z appears only in its own row with positive cost),
/// solves the remaining program, and lifts the solution and duals back.
LpSolution solve_lp(const OneHopLp& lp, const LpSolver& solver);
LpSolution solve_lp(const OneHopLp& lp);

/// An integral assignment of the LP variables.
struct RoundedAssignment {
  std::vector<std::uint8_t> seeded;  // per source node
  std::vector<std::uint8_t> live;    // per arc
  std::vector<std::uint8_t> failed;  // per arc: Z
  /// sum (a - b) X + sum c Y + sum d Z; add sum b for the absolute cost.
  double objective = 0.0;
};

/// 1 + ln k, or 1 when k <= 1.
double rounding_scale(std::size_t num_positive_pools);

/// One draw of the threshold rounding: one tau per source, X_i = [alpha x_i > tau_i],
/// arc (i,j) fires iff alpha y_ij > tau_i (which also seeds i).
RoundedAssignment round_once(const OneHopLp& lp, const LpSolution& sol, const BipartiteExpansion& bip,
                             const CostModel& cm, double alpha, Rng& rng);

/// Consistency of a rounded assignment with the observation.
bool assignment_feasible(const RoundedAssignment& r, const BipartiteExpansion& bip, const PoolSet& ps,
                         const Observation& obs);

Cascade assignment_to_cascade(const RoundedAssignment& r, const BipartiteExpansion& bip);

struct RoundOptions {
  std::size_t max_retries = 100;
  /// 0 means 1 + ln |positive pools|.
  double alpha = 0.0;
};

struct RoundingResult {
  Cascade cascade;
  OneHopCostBreakdown cost;
  double lp_objective = 0.0;
  std::size_t draws = 0;
  bool repaired = false;
};

/// Threshold rounding with up to max_retries redraws; if every draw is
/// inconsistent, the last draw is repaired by adding, per uncovered pool, the
/// seed + live arc with the smallest marginal cost increase.
RoundingResult round_cascade(const OneHopLp& lp, const LpSolution& sol, const BipartiteExpansion& bip,
                             const CostModel& cm, const PoolSet& ps, const Observation& obs, Rng& rng,
                             const RoundOptions& options = {});

/// build + solve + round.
RoundingResult reconstruct_one_hop(const BipartiteExpansion& bip, const CostModel& cm, const PoolSet& ps,
                                   const Observation& obs, Rng& rng, const RoundOptions& options = {});

/// Collapses each positive pool to one uniformly chosen admissible member and
/// runs the same pipeline.
RoundingResult one_hop_baseline_random(const BipartiteExpansion& bip, const CostModel& cm, const PoolSet& ps,
                                       const Observation& obs, Rng& rng, const RoundOptions& options = {});

}  // namespace poolcascade
