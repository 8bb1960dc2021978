#include "poolcascade/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "poolcascade/cost.hpp"
#include "poolcascade/errors.hpp"
#include "poolcascade/metrics.hpp"
#include "poolcascade/one_hop.hpp"
#include "poolcascade/pooling.hpp"
#include "poolcascade/reconstruct.hpp"
#include "poolcascade/simulate.hpp"

namespace poolcascade {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::approx:
      return "approx";
    case Method::approx_random:
      return "approx_random";
    case Method::approx_all:
      return "approx_all";
    case Method::round:
      return "round";
    case Method::round_random:
      return "round_random";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::approx, Method::approx_random, Method::approx_all, Method::round, Method::round_random}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidInputError(fmt::format("unknown method '{}'", name));
}

bool is_one_hop(Method m) { return m == Method::round || m == Method::round_random; }

std::string NetworkSpec::describe() const {
  switch (kind) {
    case Kind::ba:
      return fmt::format("ba(n={}, m={})", n, m);
    case Kind::gnq:
      return fmt::format("gnq(n={}, q={})", n, q);
    case Kind::edge_list:
      return fmt::format("edge_list({})", path);
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (pool_ratios.empty() || pool_sizes.empty() || methods.empty()) {
    throw InvalidInputError("pool_ratios, pool_sizes and methods must be nonempty");
  }
  if (replicates == 0) throw InvalidInputError("replicates must be at least 1");
  if (level < 1) throw InvalidInputError("level must be at least 1");
  for (double r : pool_ratios) {
    if (!(r > 0.0 && r <= 1.0)) throw InvalidInputError(fmt::format("pool ratio {} outside (0, 1]", r));
  }
  for (std::size_t s : pool_sizes) {
    if (s == 0) throw InvalidInputError("pool size must be positive");
  }
  for (double p : probabilities) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidInputError(fmt::format("probability {} outside (0, 1)", p));
  }
  for (double b : betas) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw InvalidInputError(fmt::format("beta {} is invalid", b));
  }
  bool any_one_hop = std::any_of(methods.begin(), methods.end(), is_one_hop);
  if (any_one_hop && seed_probabilities.empty()) {
    throw InvalidInputError("one-hop methods need seed_probabilities");
  }
  for (double p : seed_probabilities) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidInputError(fmt::format("seed probability {} outside (0, 1)", p));
  }
  if (network.kind != NetworkSpec::Kind::edge_list) {
    if (probabilities.empty()) throw InvalidInputError("generated networks need probabilities");
    if (network.n < 2) throw InvalidInputError("network needs at least two nodes");
  } else {
    if (network.path.empty()) throw InvalidInputError("edge_list network needs a path");
    if (network.weight_mode == EdgeWeightMode::duration && betas.empty()) {
      throw InvalidInputError("duration-weighted networks need betas");
    }
  }
  if (network.kind == NetworkSpec::Kind::ba && (network.m == 0 || network.m >= network.n)) {
    throw InvalidInputError("ba needs 0 < m < n");
  }
  if (network.kind == NetworkSpec::Kind::gnq && !(network.q > 0.0 && network.q < 1.0)) {
    throw InvalidInputError("gnq needs q in (0, 1)");
  }
}

namespace {

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  if (value.empty() || value == "none") return out;
  std::istringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InvalidInputError(fmt::format("{}: '{}' is not a number", key, v));
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    unsigned long long d = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InvalidInputError(fmt::format("{}: '{}' is not a nonnegative integer", key, v));
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidInputError(fmt::format("{}: '{}' is not a boolean", key, v));
}

std::string join_doubles(const std::vector<double>& xs) {
  if (xs.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += fmt::format("{}{:.10g}", i ? ", " : "", xs[i]);
  return out;
}

std::string fmt_number(double x) { return std::isnan(x) ? std::string("file") : fmt::format("{:.10g}", x); }

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  bool schema_seen = false;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidInputError(fmt::format("line {}: expected key = value", line_no));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!schema_seen) {
      if (key != "schema") throw InvalidInputError(fmt::format("line {}: first setting must be schema", line_no));
      if (value != kConfigSchema) {
        throw InvalidInputError(fmt::format("unsupported config schema '{}' (expected {})", value, kConfigSchema));
      }
      schema_seen = true;
      continue;
    }
    if (!seen.emplace(key, line_no).second) {
      throw InvalidInputError(fmt::format("line {}: duplicate key '{}'", line_no, key));
    }
    if (key == "network") {
      if (value == "ba") {
        cfg.network.kind = NetworkSpec::Kind::ba;
      } else if (value == "gnq") {
        cfg.network.kind = NetworkSpec::Kind::gnq;
      } else if (value == "edge_list") {
        cfg.network.kind = NetworkSpec::Kind::edge_list;
      } else {
        throw InvalidInputError(fmt::format("line {}: unknown network '{}'", line_no, value));
      }
    } else if (key == "n") {
      cfg.network.n = to_uint(key, value);
    } else if (key == "m") {
      cfg.network.m = to_uint(key, value);
    } else if (key == "q") {
      cfg.network.q = to_double(key, value);
    } else if (key == "path") {
      cfg.network.path = value;
    } else if (key == "weight_mode") {
      if (value == "probability") {
        cfg.network.weight_mode = EdgeWeightMode::probability;
      } else if (value == "duration") {
        cfg.network.weight_mode = EdgeWeightMode::duration;
      } else {
        throw InvalidInputError(fmt::format("line {}: unknown weight_mode '{}'", line_no, value));
      }
    } else if (key == "probabilities" || key == "betas" || key == "seed_probabilities" || key == "pool_ratios") {
      std::vector<double> xs;
      for (const auto& item : split_list(value)) xs.push_back(to_double(key, item));
      if (key == "probabilities") cfg.probabilities = xs;
      if (key == "betas") cfg.betas = xs;
      if (key == "seed_probabilities") cfg.seed_probabilities = xs;
      if (key == "pool_ratios") cfg.pool_ratios = xs;
    } else if (key == "pool_sizes") {
      cfg.pool_sizes.clear();
      for (const auto& item : split_list(value)) cfg.pool_sizes.push_back(to_uint(key, item));
    } else if (key == "methods") {
      cfg.methods.clear();
      for (const auto& item : split_list(value)) cfg.methods.push_back(parse_method(item));
    } else if (key == "replicates") {
      cfg.replicates = to_uint(key, value);
    } else if (key == "base_seed") {
      cfg.base_seed = to_uint(key, value);
    } else if (key == "level") {
      cfg.level = static_cast<int>(to_uint(key, value));
    } else if (key == "threads") {
      cfg.threads = to_uint(key, value);
    } else if (key == "max_redraws") {
      cfg.max_redraws = to_uint(key, value);
    } else if (key == "record_time") {
      cfg.record_time = to_bool(key, value);
    } else {
      throw InvalidInputError(fmt::format("line {}: unknown key '{}'", line_no, key));
    }
  }
  if (!schema_seen) throw InvalidInputError("config has no schema line");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError(fmt::format("cannot open config '{}'", path));
  return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& cfg) {
  out << "schema = " << kConfigSchema << '\n';
  switch (cfg.network.kind) {
    case NetworkSpec::Kind::ba:
      out << "network = ba\nn = " << cfg.network.n << "\nm = " << cfg.network.m << '\n';
      break;
    case NetworkSpec::Kind::gnq:
      out << "network = gnq\nn = " << cfg.network.n << "\nq = " << fmt::format("{:.10g}", cfg.network.q) << '\n';
      break;
    case NetworkSpec::Kind::edge_list:
      out << "network = edge_list\npath = " << cfg.network.path << "\nweight_mode = "
          << (cfg.network.weight_mode == EdgeWeightMode::duration ? "duration" : "probability") << '\n';
      break;
  }
  out << "probabilities = " << join_doubles(cfg.probabilities) << '\n';
  out << "betas = " << join_doubles(cfg.betas) << '\n';
  out << "seed_probabilities = " << join_doubles(cfg.seed_probabilities) << '\n';
  out << "pool_ratios = " << join_doubles(cfg.pool_ratios) << '\n';
  out << "pool_sizes = ";
  for (std::size_t i = 0; i < cfg.pool_sizes.size(); ++i) out << (i ? ", " : "") << cfg.pool_sizes[i];
  out << "\nmethods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) out << (i ? ", " : "") << to_string(cfg.methods[i]);
  out << "\nreplicates = " << cfg.replicates << "\nbase_seed = " << cfg.base_seed << "\nlevel = " << cfg.level
      << "\nthreads = " << cfg.threads << "\nmax_redraws = " << cfg.max_redraws
      << "\nrecord_time = " << (cfg.record_time ? "true" : "false") << '\n';
}

std::string GridPoint::key() const {
  if (one_hop) {
    return fmt::format("one_hop|p={}|p0={}|ratio={}|size={}", fmt_number(diffusion), fmt_number(seed_prob),
                       fmt_number(pool_ratio), pool_size);
  }
  return fmt::format("single_seed|p={}|ratio={}|size={}", fmt_number(diffusion), fmt_number(pool_ratio), pool_size);
}

std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg) {
  std::vector<double> diffusions;
  if (cfg.network.kind == NetworkSpec::Kind::edge_list && cfg.network.weight_mode == EdgeWeightMode::duration) {
    diffusions = cfg.betas;
  } else if (!cfg.probabilities.empty()) {
    diffusions = cfg.probabilities;
  } else {
    diffusions = {std::nan("")};
  }
  bool single = std::any_of(cfg.methods.begin(), cfg.methods.end(), [](Method m) { return !is_one_hop(m); });
  bool one_hop = std::any_of(cfg.methods.begin(), cfg.methods.end(), is_one_hop);
  std::vector<GridPoint> grid;
  if (single) {
    for (double d : diffusions) {
      for (double r : cfg.pool_ratios) {
        for (std::size_t s : cfg.pool_sizes) grid.push_back({false, d, 0.0, r, s});
      }
    }
  }
  if (one_hop) {
    for (double d : diffusions) {
      for (double p0 : cfg.seed_probabilities) {
        for (double r : cfg.pool_ratios) {
          for (std::size_t s : cfg.pool_sizes) grid.push_back({true, d, p0, r, s});
        }
      }
    }
  }
  return grid;
}

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t replicate_seed(std::uint64_t base_seed, const GridPoint& point, std::size_t replicate) {
  return base_seed ^ stable_hash(fmt::format("{}#{}", point.key(), replicate));
}

Graph build_network(const NetworkSpec& spec, std::uint64_t base_seed) {
  Rng rng(base_seed ^ stable_hash("network"));
  switch (spec.kind) {
    case NetworkSpec::Kind::ba:
      return generate_ba(spec.n, spec.m, rng);
    case NetworkSpec::Kind::gnq:
      return generate_gnq(spec.n, spec.q, rng);
    case NetworkSpec::Kind::edge_list:
      if (spec.weight_mode == EdgeWeightMode::duration) {
        // Durations are kept on the edges; probabilities are set per grid point.
        return load_edge_list(spec.path, EdgeWeightMode::duration, 1.0);
      }
      return load_edge_list(spec.path, EdgeWeightMode::probability);
  }
  throw InternalError("unknown network kind");
}

namespace {

Graph with_diffusion(const Graph& base, const ExperimentConfig& cfg, double diffusion) {
  Graph g = base;
  if (std::isnan(diffusion)) {
    if (!g.has_all_probabilities()) throw InvalidInputError("network has edges without probabilities");
  } else if (cfg.network.kind == NetworkSpec::Kind::edge_list &&
             cfg.network.weight_mode == EdgeWeightMode::duration) {
    g.set_probability_from_duration(diffusion);
  } else {
    g.set_homogeneous_probability(diffusion);
  }
  return g;
}

struct Prepared {
  Graph graph;
  CostModel costs;
  BipartiteExpansion expansion;
};

template <typename F>
void run_method(MetricRow& row, bool record_time, F&& body) {
  auto start = std::chrono::steady_clock::now();
  try {
    body();
    row.status = RowStatus::ok;
  } catch (const InfeasibleError& e) {
    row.status = RowStatus::infeasible;
    row.status_detail = std::string(to_string(e.reason()));
  } catch (const Error& e) {
    row.status = RowStatus::error;
    row.status_detail = e.what();
  }
  if (record_time) {
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
}

void fill_metrics(MetricRow& row, std::span<const NodeId> reconstructed, std::span<const NodeId> truth,
                  std::size_t universe) {
  Confusion c = confusion(reconstructed, truth, universe);
  row.tp = c.tp;
  row.fp = c.fp;
  row.fn = c.fn;
  row.tn = c.tn;
  row.reconstructed_size = reconstructed.size();
  row.f1 = f1_score(reconstructed, truth);
  row.e_rel = relative_error(reconstructed, truth);
}

std::vector<MetricRow> run_replicate(const ExperimentConfig& cfg, const GridPoint& point, const Prepared& prep,
                                     std::size_t replicate) {
  const std::uint64_t seed = replicate_seed(cfg.base_seed, point, replicate);
  Rng rng(seed);
  std::vector<Method> methods;
  for (Method m : cfg.methods) {
    if (is_one_hop(m) == point.one_hop) methods.push_back(m);
  }
  auto blank = [&](Method m) {
    MetricRow row;
    row.point = point;
    row.replicate = replicate;
    row.seed = seed;
    row.method = m;
    return row;
  };
  std::vector<MetricRow> rows;

  if (!point.one_hop) {
    const Graph& g = prep.graph;
    std::uniform_int_distribution<NodeId> pick_root(0, static_cast<NodeId>(g.num_nodes() - 1));
    NodeId root = -1;
    Cascade truth;
    std::size_t redraws = 0;
    while (true) {
      root = pick_root(rng);
      truth = simulate_single_seed(g, root, rng);
      if (truth.infected().size() >= 2) break;
      if (++redraws > cfg.max_redraws) {
        for (Method m : methods) {
          MetricRow row = blank(m);
          row.status = RowStatus::error;
          row.status_detail = "degenerate cascades exceeded max_redraws";
          row.redraws = redraws;
          rows.push_back(row);
        }
        return rows;
      }
    }
    if (redraws > 0) spdlog::debug("{} replicate {}: {} degenerate cascades redrawn", point.key(), replicate, redraws);

    std::vector<NodeId> all(g.num_nodes());
    for (std::size_t v = 0; v < all.size(); ++v) all[v] = static_cast<NodeId>(v);
    PoolSet ps = design_random_pools(all, point.pool_ratio, point.pool_size, rng);
    Observation obs = evaluate_pools(ps, truth.infected());
    ReconstructOptions options;
    options.level = cfg.level;

    for (Method m : methods) {
      MetricRow row = blank(m);
      row.redraws = redraws;
      row.num_nodes = g.num_nodes();
      row.num_pools = ps.size();
      row.positive_pools = obs.num_positive();
      row.truth_size = truth.infected().size();
      Rng method_rng(seed ^ stable_hash(to_string(m)));
      run_method(row, cfg.record_time, [&] {
        ReconstructionResult res;
        if (m == Method::approx) {
          res = approx_cascade(g, prep.costs, root, ps, obs, options);
        } else if (m == Method::approx_random) {
          res = baseline_random(g, prep.costs, root, ps, obs, method_rng, options);
        } else {
          res = baseline_all(g, prep.costs, root, ps, obs, options);
        }
        row.cost = res.cost.total;
        fill_metrics(row, res.cascade.infected(), truth.infected(), g.num_nodes());
      });
      rows.push_back(row);
    }
    return rows;
  }

  const BipartiteExpansion& bip = prep.expansion;
  CostModel costs = compute_one_hop_costs(bip, point.seed_prob);
  Cascade truth;
  std::size_t redraws = 0;
  while (true) {
    truth = simulate_one_hop(bip, point.seed_prob, rng);
    if (!truth.arcs().empty()) break;
    if (++redraws > cfg.max_redraws) {
      for (Method m : methods) {
        MetricRow row = blank(m);
        row.status = RowStatus::error;
        row.status_detail = "degenerate cascades exceeded max_redraws";
        row.redraws = redraws;
        rows.push_back(row);
      }
      return rows;
    }
  }
  if (redraws > 0) spdlog::debug("{} replicate {}: {} degenerate cascades redrawn", point.key(), replicate, redraws);

  std::vector<NodeId> targets;
  for (std::size_t u = 0; u < bip.num_targets(); ++u) targets.push_back(bip.target_copy(static_cast<NodeId>(u)));
  PoolSet ps = design_random_pools(targets, point.pool_ratio, point.pool_size, rng);
  Observation obs = evaluate_pools(ps, truth.infected());

  for (Method m : methods) {
    MetricRow row = blank(m);
    row.redraws = redraws;
    row.num_nodes = bip.num_nodes();
    row.num_pools = ps.size();
    row.positive_pools = obs.num_positive();
    row.truth_size = truth.infected().size();
    Rng method_rng(seed ^ stable_hash(to_string(m)));
    run_method(row, cfg.record_time, [&] {
      RoundingResult res = m == Method::round ? reconstruct_one_hop(bip, costs, ps, obs, method_rng)
                                              : one_hop_baseline_random(bip, costs, ps, obs, method_rng);
      row.cost = res.cost.total;
      fill_metrics(row, res.cascade.infected(), truth.infected(), bip.num_nodes());
    });
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, const std::function<void(const MetricRow&)>& sink) {
  cfg.validate();
  const std::vector<GridPoint> grid = expand_grid(cfg);
  const Graph base = build_network(cfg.network, cfg.base_seed);
  spdlog::info("network {}: {} nodes, {} edges; {} grid points x {} replicates", cfg.network.describe(),
               base.num_nodes(), base.num_edges(), grid.size(), cfg.replicates);

  // Probability assignments are shared by every grid point with the same diffusion value.
  std::map<std::pair<bool, double>, Prepared> prepared;
  std::vector<const Prepared*> prep_of(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto key = std::make_pair(grid[i].one_hop, std::isnan(grid[i].diffusion) ? -1.0 : grid[i].diffusion);
    auto it = prepared.find(key);
    if (it == prepared.end()) {
      Prepared p;
      p.graph = with_diffusion(base, cfg, grid[i].diffusion);
      if (grid[i].one_hop) {
        p.expansion = time_expand(p.graph);
      } else {
        p.costs = compute_costs(p.graph);
      }
      it = prepared.emplace(key, std::move(p)).first;
    }
    prep_of[i] = &it->second;
  }

  const std::size_t tasks = grid.size() * cfg.replicates;
  std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(tasks, 1));

  std::vector<std::optional<std::vector<MetricRow>>> done(tasks);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  auto work = [&] {
    while (true) {
      std::size_t t = next.fetch_add(1);
      if (t >= tasks) return;
      std::size_t gi = t / cfg.replicates;
      std::size_t rep = t % cfg.replicates;
      std::vector<MetricRow> rows;
      try {
        rows = run_replicate(cfg, grid[gi], *prep_of[gi], rep);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = tasks;
        ready.notify_all();
        return;
      }
      std::lock_guard lock(mu);
      done[t] = std::move(rows);
      ready.notify_all();
    }
  };

  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);

  // The calling thread emits rows in task order; with one worker it also does the work.
  std::size_t emitted = 0;
  if (workers == 1) {
    work();
  }
  while (emitted < tasks) {
    std::vector<MetricRow> rows;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return failure || done[emitted].has_value(); });
      if (failure && !done[emitted]) break;
      rows = std::move(*done[emitted]);
      done[emitted].reset();
    }
    for (const auto& row : rows) sink(row);
    ++emitted;
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<MetricRow> run_experiment(const ExperimentConfig& cfg) {
  std::vector<MetricRow> rows;
  run_experiment(cfg, [&](const MetricRow& row) { rows.push_back(row); });
  return rows;
}

namespace {

std::string_view status_name(RowStatus s) {
  switch (s) {
    case RowStatus::ok:
      return "ok";
    case RowStatus::infeasible:
      return "infeasible";
    case RowStatus::error:
      return "error";
  }
  return "unknown";
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::string metrics_csv_header(bool with_time) {
  std::string h =
      "model,diffusion,seed_prob,pool_ratio,pool_size,replicate,seed,method,status,redraws,num_nodes,num_pools,"
      "positive_pools,truth_size,reconstructed_size,tp,fp,fn,tn,f1,e_rel,cost";
  if (with_time) h += ",wall_time_s";
  return h + ",detail";
}

std::string metrics_csv_row(const MetricRow& r, bool with_time) {
  std::string s = fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.10g},{:.10g},{:.10g}",
                              r.point.one_hop ? "one_hop" : "single_seed", fmt_number(r.point.diffusion),
                              fmt_number(r.point.seed_prob), fmt_number(r.point.pool_ratio), r.point.pool_size,
                              r.replicate, r.seed, to_string(r.method), status_name(r.status), r.redraws,
                              r.num_nodes, r.num_pools, r.positive_pools, r.truth_size, r.reconstructed_size, r.tp,
                              r.fp, r.fn, r.tn, r.f1, r.e_rel, r.cost);
  if (with_time) s += fmt::format(",{:.6f}", r.wall_time_s);
  return s + "," + csv_safe(r.status_detail);
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows, bool with_time) {
  out << "#schema=" << kMetricsSchema << '\n' << metrics_csv_header(with_time) << '\n';
  for (const auto& r : rows) out << metrics_csv_row(r, with_time) << '\n';
}

}  // namespace poolcascade
