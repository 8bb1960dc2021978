#include "poolcascade/io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "poolcascade/errors.hpp"

namespace poolcascade {

std::int64_t NodeLabels::label(NodeId v) const {
  NodeId base = expansion ? expansion->origin(v) : v;
  return graph ? graph->label(base) : base;
}

NodeId NodeLabels::node(std::int64_t lbl, bool as_target) const {
  NodeId base = -1;
  if (graph) {
    auto found = graph->node_of_label(lbl);
    if (!found) throw InvalidInputError(fmt::format("unknown node label {}", lbl));
    base = *found;
  } else {
    base = static_cast<NodeId>(lbl);
  }
  if (!expansion) return base;
  for (std::size_t v = 0; v < expansion->num_nodes(); ++v) {
    auto id = static_cast<NodeId>(v);
    if (expansion->origin(id) == base && expansion->is_target(id) == as_target) return id;
  }
  throw InvalidInputError(
      fmt::format("label {} has no {} copy in the bipartite instance", lbl, as_target ? "target" : "source"));
}

void write_cascade(std::ostream& out, const Cascade& c, const NodeLabels& labels) {
  if (c.kind() == CascadeKind::single_seed) {
    out << "root " << labels.label(c.root()) << '\n';
  } else {
    out << "seeds";
    for (NodeId s : c.seeds()) out << ' ' << labels.label(s);
    out << '\n';
  }
  for (const auto& [u, v] : c.arcs()) out << labels.label(u) << ' ' << labels.label(v) << '\n';
}

namespace {

std::int64_t parse_label(const std::string& token, std::size_t line_no) {
  try {
    std::size_t used = 0;
    long long value = std::stoll(token, &used);
    if (used != token.size() || value < 0) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw InvalidInputError(fmt::format("line {}: '{}' is not a node id", line_no, token));
  }
}

// Strips comments; returns false for blank lines.
bool content_of(std::string& line) {
  auto hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  return line.find_first_not_of(" \t\r") != std::string::npos;
}

}  // namespace

Cascade read_cascade(std::istream& in, const NodeLabels& labels) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::string> header;
  std::vector<NodeId> seeds;
  NodeId root = -1;
  std::vector<Arc> arcs;
  while (std::getline(in, line)) {
    ++line_no;
    if (!content_of(line)) continue;
    std::istringstream ss(line);
    std::string first;
    ss >> first;
    if (!header) {
      if (first != "root" && first != "seeds") {
        throw InvalidInputError(fmt::format("line {}: expected 'root' or 'seeds' header", line_no));
      }
      header = first;
      std::string tok;
      if (first == "root") {
        if (!(ss >> tok)) throw InvalidInputError(fmt::format("line {}: missing root id", line_no));
        root = labels.node(parse_label(tok, line_no));
        if (ss >> tok) throw InvalidInputError(fmt::format("line {}: trailing tokens", line_no));
      } else {
        while (ss >> tok) seeds.push_back(labels.node(parse_label(tok, line_no)));
      }
      continue;
    }
    std::string second, extra;
    if (!(ss >> second) || (ss >> extra)) {
      throw InvalidInputError(fmt::format("line {}: expected two node ids", line_no));
    }
    bool one_hop = *header == "seeds";
    arcs.emplace_back(labels.node(parse_label(first, line_no)), labels.node(parse_label(second, line_no), one_hop));
  }
  if (!header) throw InvalidInputError("cascade file has no header");
  if (*header == "root") return Cascade::single_seed(root, std::move(arcs));
  return Cascade::one_hop(std::move(seeds), std::move(arcs));
}

void write_pools(std::ostream& out, const PoolSet& ps, const Observation* obs, const NodeLabels& labels) {
  if (obs && obs->size() != ps.size()) throw InvalidInputError("observation does not match pools");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    out << "g " << i << ' ' << (obs ? (obs->positive[i] ? "1" : "0") : "?");
    for (NodeId v : ps.pools[i]) out << ' ' << labels.label(v);
    out << '\n';
  }
}

PoolFile read_pools(std::istream& in, const NodeLabels& labels) {
  PoolFile file;
  std::vector<char> results;
  std::set<long long> ids;
  std::string line;
  std::size_t line_no = 0;
  bool as_target = labels.expansion != nullptr;
  while (std::getline(in, line)) {
    ++line_no;
    if (!content_of(line)) continue;
    std::istringstream ss(line);
    std::string tag, id, result;
    if (!(ss >> tag >> id >> result) || tag != "g") {
      throw InvalidInputError(fmt::format("line {}: expected 'g <pool_id> <0|1|?> <nodes...>'", line_no));
    }
    if (!ids.insert(parse_label(id, line_no)).second) {
      throw InvalidInputError(fmt::format("line {}: duplicate pool id {}", line_no, id));
    }
    if (result != "0" && result != "1" && result != "?") {
      throw InvalidInputError(fmt::format("line {}: pool result must be 0, 1 or ?", line_no));
    }
    std::vector<NodeId> members;
    std::set<NodeId> seen;
    std::string tok;
    while (ss >> tok) {
      NodeId v = labels.node(parse_label(tok, line_no), as_target);
      if (seen.insert(v).second) members.push_back(v);
    }
    if (members.empty()) throw InvalidInputError(fmt::format("line {}: empty pool", line_no));
    file.pools.pools.push_back(std::move(members));
    results.push_back(result[0]);
  }
  std::size_t largest = 0;
  for (const auto& p : file.pools.pools) largest = std::max(largest, p.size());
  file.pools.pool_size = largest;
  bool tested = std::none_of(results.begin(), results.end(), [](char r) { return r == '?'; });
  if (tested) {
    Observation obs;
    for (char r : results) obs.positive.push_back(r == '1');
    file.observation = std::move(obs);
  }
  return file;
}

}  // namespace poolcascade
