#pragma once

#include <span>
#include <vector>

#include "poolcascade/cascade.hpp"
#include "poolcascade/graph.hpp"

namespace poolcascade {

/// A pool design. Pools produced by design_random_pools are disjoint, but
/// every consumer accepts overlapping pools.
struct PoolSet {
  std::vector<std::vector<NodeId>> pools;
  std::size_t pool_size = 0;
  double pool_ratio = 0.0;

  std::size_t size() const { return pools.size(); }
};

/// Per-pool test outcome; `positive[i]` is the result of pool i.
struct Observation {
  std::vector<bool> positive;

  std::size_t size() const { return positive.size(); }
  std::vector<int> gamma1() const;
  std::vector<int> gamma0() const;
  std::size_t num_positive() const;
};

/// Sorted union of the nodes of all negative pools.
std::vector<NodeId> negative_nodes(const PoolSet& ps, const Observation& obs);
NodeMask negative_mask(const PoolSet& ps, const Observation& obs, std::size_t num_nodes);

struct NoiseModel {
  double false_positive = 0.0;
  double false_negative = 0.0;

  /// Throws InvalidInputError unless both rates lie in [0, 1].
  void validate() const;
};

/// Chooses floor(ratio * |nodes|) nodes uniformly without replacement and
/// chunks them into pools of `pool_size`; the last pool keeps the remainder.
PoolSet design_random_pools(std::span<const NodeId> nodes, double pool_ratio, std::size_t pool_size,
                            Rng& rng);

/// Pool i is positive iff it contains an infected node.
Observation evaluate_pools(const PoolSet& ps, std::span<const NodeId> infected);

/// Flips truly-positive pools with probability false_negative and
/// truly-negative pools with probability false_positive, independently.
Observation apply_noise(const Observation& obs, const NoiseModel& nm, Rng& rng);

/// Infected set avoids every negative pool and meets every positive pool.
bool is_consistent(const Cascade& c, const Observation& obs, const PoolSet& ps);
bool is_consistent(std::span<const NodeId> infected, const Observation& obs, const PoolSet& ps);

}  // namespace poolcascade
