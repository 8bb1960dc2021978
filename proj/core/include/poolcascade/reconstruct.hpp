#pragma once

#include <cstddef>
#include <vector>

#include "poolcascade/cascade.hpp"
#include "poolcascade/cost.hpp"
#include "poolcascade/graph.hpp"
#include "poolcascade/pooling.hpp"

namespace poolcascade {

enum class AssumptionPolicy {
  /// Throw AssumptionViolation when some p_e > 1/2.
  enforce,
  /// Log a warning and clamp negative edge weights c_e - d_e to zero.
  warn,
};

struct ReconstructOptions {
  int level = 2;
  AssumptionPolicy assumption = AssumptionPolicy::enforce;
};

struct ReconstructionResult {
  Cascade cascade;
  CostBreakdown cost;
  double gst_weight = 0.0;
  /// Outcome the cascade was built for; differs from the input only in noisy mode.
  Observation outcome_used;
  /// ln(1/q) of the chosen hypothesis; 0 outside noisy mode.
  double noisy_penalty = 0.0;
  std::size_t hypotheses_evaluated = 0;
  /// False when noisy search stopped at its hypothesis budget.
  bool exhaustive = true;
};

/// Group Steiner weights: w(u) = sum of d_e over edges at u, w(e) = c_e - d_e.
struct GstWeights {
  std::vector<double> node;
  std::vector<double> edge;
};
GstWeights pool_gst_weights(const Graph& g, const CostModel& cm, AssumptionPolicy policy = AssumptionPolicy::enforce);

/// Removes the negative-pool nodes, then solves group Steiner tree from `root`
/// with the positive pools as groups.
ReconstructionResult approx_cascade(const Graph& g, const CostModel& cm, NodeId root, const PoolSet& ps,
                                    const Observation& obs, const ReconstructOptions& options = {});

/// Runs approx_cascade from every admissible root and keeps the cheapest;
/// for use when the seed is unknown. Infeasible roots are skipped.
ReconstructionResult approx_cascade_all_roots(const Graph& g, const CostModel& cm, const PoolSet& ps,
                                              const Observation& obs, const ReconstructOptions& options = {});

struct NoisyOptions {
  ReconstructOptions base;
  /// Branch-and-bound over hypotheses in increasing-penalty order.
  bool prune = false;
  /// Pool count above which exhaustive enumeration is refused.
  std::size_t max_pools = 16;
  /// With prune: stop after this many hypotheses (result marked non-exhaustive).
  std::size_t max_hypotheses = 1u << 16;
};

/// -ln P(observed | actual) for one pool.
double outcome_penalty(bool observed_positive, bool actual_positive, const NoiseModel& nm);
/// ln(1/q): sum of outcome_penalty over pools.
double hypothesis_penalty(const Observation& observed, const Observation& actual, const NoiseModel& nm);

/// Minimises Cost(T | hypothesised outcome) + ln(1/q) over hypothesised true
/// outcomes. Hypotheses with zero probability are never evaluated.
ReconstructionResult approx_cascade_noisy(const Graph& g, const CostModel& cm, NodeId root, const PoolSet& ps,
                                          const Observation& obs, const NoiseModel& nm,
                                          const NoisyOptions& options = {});

/// Replaces each positive pool by one uniformly chosen member, then approx_cascade.
ReconstructionResult baseline_random(const Graph& g, const CostModel& cm, NodeId root, const PoolSet& ps,
                                     const Observation& obs, Rng& rng, const ReconstructOptions& options = {});

/// Treats every member of every positive pool as a separate singleton group.
ReconstructionResult baseline_all(const Graph& g, const CostModel& cm, NodeId root, const PoolSet& ps,
                                  const Observation& obs, const ReconstructOptions& options = {});

}  // namespace poolcascade
