#include "poolcascade/pooling.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "poolcascade/errors.hpp"

namespace poolcascade {

std::vector<int> Observation::gamma1() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < positive.size(); ++i) {
    if (positive[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> Observation::gamma0() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < positive.size(); ++i) {
    if (!positive[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::size_t Observation::num_positive() const {
  return static_cast<std::size_t>(std::count(positive.begin(), positive.end(), true));
}

std::vector<NodeId> negative_nodes(const PoolSet& ps, const Observation& obs) {
  if (obs.size() != ps.size()) {
    throw InvalidInputError("observation and pool set sizes differ");
  }
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!obs.positive[i]) out.insert(out.end(), ps.pools[i].begin(), ps.pools[i].end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NodeMask negative_mask(const PoolSet& ps, const Observation& obs, std::size_t num_nodes) {
  return make_mask(num_nodes, negative_nodes(ps, obs));
}

void NoiseModel::validate() const {
  if (!(false_positive >= 0.0 && false_positive <= 1.0) || !(false_negative >= 0.0 && false_negative <= 1.0)) {
    throw InvalidInputError(
        fmt::format("noise rates must lie in [0, 1] (fp={}, fn={})", false_positive, false_negative));
  }
}

PoolSet design_random_pools(std::span<const NodeId> nodes, double pool_ratio, std::size_t pool_size, Rng& rng) {
  if (!(pool_ratio > 0.0 && pool_ratio <= 1.0)) {
    throw InvalidInputError(fmt::format("pool ratio {} outside (0, 1]", pool_ratio));
  }
  if (pool_size < 1) {
    throw InvalidInputError("pool size must be at least 1");
  }
  // The epsilon keeps e.g. 0.9 * 1000 from flooring to 899.
  auto count = static_cast<std::size_t>(std::floor(pool_ratio * static_cast<double>(nodes.size()) + 1e-9));
  std::vector<NodeId> order(nodes.begin(), nodes.end());
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(count);

  PoolSet ps;
  ps.pool_size = pool_size;
  ps.pool_ratio = pool_ratio;
  for (std::size_t start = 0; start < count; start += pool_size) {
    std::size_t stop = std::min(count, start + pool_size);
    ps.pools.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                          order.begin() + static_cast<std::ptrdiff_t>(stop));
  }
  return ps;
}

Observation evaluate_pools(const PoolSet& ps, std::span<const NodeId> infected) {
  std::vector<NodeId> sorted(infected.begin(), infected.end());
  std::sort(sorted.begin(), sorted.end());
  Observation obs;
  obs.positive.reserve(ps.size());
  for (const auto& pool : ps.pools) {
    bool hit = std::any_of(pool.begin(), pool.end(),
                           [&](NodeId v) { return std::binary_search(sorted.begin(), sorted.end(), v); });
    obs.positive.push_back(hit);
  }
  return obs;
}

Observation apply_noise(const Observation& obs, const NoiseModel& nm, Rng& rng) {
  nm.validate();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Observation out = obs;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    double u = unif(rng);
    if (obs.positive[i]) {
      if (u < nm.false_negative) out.positive[i] = false;
    } else {
      if (u < nm.false_positive) out.positive[i] = true;
    }
  }
  return out;
}

bool is_consistent(std::span<const NodeId> infected, const Observation& obs, const PoolSet& ps) {
  if (obs.size() != ps.size()) {
    throw InvalidInputError("observation and pool set sizes differ");
  }
  std::vector<NodeId> sorted(infected.begin(), infected.end());
  std::sort(sorted.begin(), sorted.end());
  auto in = [&](NodeId v) { return std::binary_search(sorted.begin(), sorted.end(), v); };
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& pool = ps.pools[i];
    bool hit = std::any_of(pool.begin(), pool.end(), in);
    if (obs.positive[i] && !hit) return false;
    if (!obs.positive[i] && hit) return false;
  }
  return true;
}

bool is_consistent(const Cascade& c, const Observation& obs, const PoolSet& ps) {
  return is_consistent(c.infected(), obs, ps);
}

}  // namespace poolcascade
