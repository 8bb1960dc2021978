#include "poolcascade/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "poolcascade/errors.hpp"

namespace poolcascade {

Confusion confusion(std::span<const NodeId> reconstructed, std::span<const NodeId> ground_truth,
                    std::size_t num_nodes) {
  std::set<NodeId> t(reconstructed.begin(), reconstructed.end());
  std::set<NodeId> g(ground_truth.begin(), ground_truth.end());
  Confusion c;
  for (NodeId v : t) {
    if (g.count(v)) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = g.size() - c.tp;
  std::set<NodeId> both = t;
  both.insert(g.begin(), g.end());
  if (both.size() > num_nodes) throw InvalidInputError("node sets exceed the universe size");
  c.tn = num_nodes - both.size();
  return c;
}

double f1_score(std::span<const NodeId> reconstructed, std::span<const NodeId> ground_truth) {
  if (ground_truth.empty()) throw InvalidInputError("F1 needs a nonempty ground truth");
  std::set<NodeId> t(reconstructed.begin(), reconstructed.end());
  std::set<NodeId> g(ground_truth.begin(), ground_truth.end());
  std::size_t tp = 0;
  for (NodeId v : t) tp += g.count(v);
  std::size_t fp = t.size() - tp;
  std::size_t fn = g.size() - tp;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

double relative_error(std::span<const NodeId> reconstructed, std::span<const NodeId> ground_truth) {
  if (ground_truth.empty()) throw InvalidInputError("relative error needs a nonempty ground truth");
  std::set<NodeId> t(reconstructed.begin(), reconstructed.end());
  std::set<NodeId> g(ground_truth.begin(), ground_truth.end());
  return (static_cast<double>(g.size()) - static_cast<double>(t.size())) / static_cast<double>(g.size());
}

namespace {

std::vector<double> ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> r(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvalidInputError("spearman needs two equally long samples of size >= 2");
  }
  auto rx = ranks(xs);
  auto ry = ranks(ys);
  double n = static_cast<double>(xs.size());
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace poolcascade
