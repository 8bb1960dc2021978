#pragma once

#include <cstddef>
#include <span>

#include "poolcascade/graph.hpp"

namespace poolcascade {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

/// Node-set confusion counts over a universe of `num_nodes` nodes.
Confusion confusion(std::span<const NodeId> reconstructed, std::span<const NodeId> ground_truth,
                    std::size_t num_nodes);

/// 2TP / (2TP + FP + FN). Throws InvalidInputError on empty ground truth.
double f1_score(std::span<const NodeId> reconstructed, std::span<const NodeId> ground_truth);

/// (|V_G| - |V_T|) / |V_G|; positive means underestimation.
double relative_error(std::span<const NodeId> reconstructed, std::span<const NodeId> ground_truth);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> xs, std::span<const double> ys);

}  // namespace poolcascade
