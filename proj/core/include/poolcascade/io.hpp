#pragma once

#include <iosfwd>
#include <optional>

#include "poolcascade/cascade.hpp"
#include "poolcascade/graph.hpp"
#include "poolcascade/pooling.hpp"
#include "poolcascade/simulate.hpp"

namespace poolcascade {

/// Maps internal node ids to the labels written in files. For a time-expanded
/// instance both copies of u share u's label.
struct NodeLabels {
  const Graph* graph = nullptr;
  const BipartiteExpansion* expansion = nullptr;

  std::int64_t label(NodeId v) const;
  /// Single-seed: graph node. One-hop: `as_target` selects u_1 over u_0.
  NodeId node(std::int64_t label, bool as_target = false) const;
};

/// Header "root <r>" or "seeds <ids...>", then one "u v" line per arc.
void write_cascade(std::ostream& out, const Cascade& c, const NodeLabels& labels);
Cascade read_cascade(std::istream& in, const NodeLabels& labels);

/// One line per pool: "g <pool_id> <0|1|?> <node ids...>".
struct PoolFile {
  PoolSet pools;
  /// Present iff every pool has a tested result.
  std::optional<Observation> observation;
};

void write_pools(std::ostream& out, const PoolSet& ps, const Observation* obs, const NodeLabels& labels);
/// Pool members are read as targets when `labels.expansion` is set.
PoolFile read_pools(std::istream& in, const NodeLabels& labels);

}  // namespace poolcascade
