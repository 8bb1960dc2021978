#include "reference.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <map>
#include <set>
#include <stdexcept>

namespace pctest {

using poolcascade::kInfinity;

std::vector<std::vector<double>> floyd_warshall(const poolcascade::WeightedDigraph& dg) {
  const std::size_t n = dg.num_nodes();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInfinity));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = 0.0;
  for (const auto& a : dg.arcs()) {
    auto& slot = d[static_cast<std::size_t>(a.from)][static_cast<std::size_t>(a.to)];
    slot = std::min(slot, a.weight);
  }
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][m] + d[m][j] < d[i][j]) d[i][j] = d[i][m] + d[m][j];
  return d;
}

bool is_arborescence(const poolcascade::WeightedDigraph& dg, NodeId root, std::span<const int> arcs) {
  const std::size_t n = dg.num_nodes();
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<NodeId>> out(n);
  std::set<NodeId> nodes{root};
  for (int a : arcs) {
    const auto& arc = dg.arc(a);
    ++indeg[static_cast<std::size_t>(arc.to)];
    out[static_cast<std::size_t>(arc.from)].push_back(arc.to);
    nodes.insert(arc.from);
    nodes.insert(arc.to);
  }
  if (indeg[static_cast<std::size_t>(root)] != 0) return false;
  for (NodeId v : nodes)
    if (v != root && indeg[static_cast<std::size_t>(v)] != 1) return false;
  std::vector<char> seen(n, 0);
  std::queue<NodeId> q;
  q.push(root);
  seen[static_cast<std::size_t>(root)] = 1;
  std::size_t count = 0;
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    ++count;
    for (NodeId w : out[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        q.push(w);
      }
    }
  }
  return count == nodes.size();
}

double exhaustive_dst(const poolcascade::WeightedDigraph& dg, NodeId root, std::span<const NodeId> terminals,
                      std::size_t k) {
  const std::size_t m = dg.num_arcs();
  if (m > 22) throw std::invalid_argument("exhaustive_dst: too many arcs");
  std::set<NodeId> term(terminals.begin(), terminals.end());
  double best = kInfinity;
  std::vector<int> chosen;
  for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
    chosen.clear();
    double w = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      if ((mask >> a) & 1U) {
        chosen.push_back(static_cast<int>(a));
        w += dg.arc(static_cast<int>(a)).weight;
      }
    }
    if (w >= best) continue;
    if (!is_arborescence(dg, root, chosen)) continue;
    std::set<NodeId> reached{root};
    for (int a : chosen) reached.insert(dg.arc(a).to);
    std::size_t hit = 0;
    for (NodeId t : term) hit += reached.count(t);
    if (hit >= k) best = w;
  }
  return best;
}

namespace {

double induced_mst(const poolcascade::Graph& g, std::span<const double> edge_weight, const std::vector<char>& in,
                   std::size_t count) {
  std::vector<std::pair<double, poolcascade::EdgeId>> es;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edge(static_cast<poolcascade::EdgeId>(e));
    if (in[static_cast<std::size_t>(ed.u)] && in[static_cast<std::size_t>(ed.v)])
      es.emplace_back(edge_weight[e], static_cast<poolcascade::EdgeId>(e));
  }
  std::sort(es.begin(), es.end());
  std::vector<NodeId> parent(g.num_nodes());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](NodeId x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  double total = 0.0;
  std::size_t joined = 0;
  for (const auto& [w, e] : es) {
    NodeId a = find(g.edge(e).u), b = find(g.edge(e).v);
    if (a == b) continue;
    parent[static_cast<std::size_t>(a)] = b;
    total += w;
    ++joined;
  }
  return joined + 1 == count ? total : kInfinity;
}

}  // namespace

double exhaustive_gst(const poolcascade::Graph& g, std::span<const double> node_weight,
                      std::span<const double> edge_weight, NodeId root,
                      const std::vector<std::vector<NodeId>>& groups, const poolcascade::NodeMask* excluded) {
  const std::size_t n = g.num_nodes();
  if (n > 20) throw std::invalid_argument("exhaustive_gst: too many nodes");
  if (excluded && (*excluded)[static_cast<std::size_t>(root)]) return kInfinity;
  double best = kInfinity;
  std::vector<char> in(n, 0);
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    if (!((mask >> root) & 1U)) continue;
    std::size_t count = 0;
    double w = 0.0;
    bool ok = true;
    for (std::size_t v = 0; v < n; ++v) {
      in[v] = static_cast<char>((mask >> v) & 1U);
      if (!in[v]) continue;
      if (excluded && (*excluded)[v]) ok = false;
      ++count;
      w += node_weight[v];
    }
    if (!ok || w >= best) continue;
    for (const auto& grp : groups) {
      bool hit = false;
      for (NodeId v : grp) hit = hit || in[static_cast<std::size_t>(v)];
      if (!hit) ok = false;
    }
    if (!ok) continue;
    w += induced_mst(g, edge_weight, in, count);
    best = std::min(best, w);
  }
  return best;
}

std::int64_t matrix_tree_count(std::size_t num_nodes, std::span<const std::pair<int, int>> edges) {
  if (num_nodes <= 1) return 1;
  const std::size_t r = num_nodes - 1;
  std::vector<std::vector<std::int64_t>> lap(num_nodes, std::vector<std::int64_t>(num_nodes, 0));
  for (const auto& [u, v] : edges) {
    ++lap[static_cast<std::size_t>(u)][static_cast<std::size_t>(u)];
    ++lap[static_cast<std::size_t>(v)][static_cast<std::size_t>(v)];
    --lap[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
    --lap[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)];
  }
  std::vector<std::vector<std::int64_t>> m(r, std::vector<std::int64_t>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) m[i][j] = lap[i + 1][j + 1];
  // Bareiss elimination keeps every intermediate an exact integer.
  std::int64_t sign = 1, prev = 1;
  for (std::size_t k = 0; k < r; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < r && m[p][k] == 0) ++p;
      if (p == r) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < r; ++i)
      for (std::size_t j = k + 1; j < r; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[r - 1][r - 1];
}

bool is_spanning_tree(std::span<const NodeId> nodes, std::span<const std::pair<NodeId, NodeId>> edges) {
  if (edges.size() + 1 != nodes.size()) return false;
  std::set<NodeId> vs(nodes.begin(), nodes.end());
  std::map<NodeId, NodeId> parent;
  for (NodeId v : vs) parent[v] = v;
  auto find = [&](NodeId x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (const auto& [u, v] : edges) {
    if (!vs.count(u) || !vs.count(v)) return false;
    NodeId a = find(u), b = find(v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

}  // namespace pctest
