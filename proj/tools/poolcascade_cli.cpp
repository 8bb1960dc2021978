#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "poolcascade/cost.hpp"
#include "poolcascade/errors.hpp"
#include "poolcascade/experiment.hpp"
#include "poolcascade/graph.hpp"
#include "poolcascade/io.hpp"
#include "poolcascade/one_hop.hpp"
#include "poolcascade/oracle.hpp"
#include "poolcascade/pooling.hpp"
#include "poolcascade/reconstruct.hpp"
#include "poolcascade/simulate.hpp"

namespace pc = poolcascade;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInfeasible = 2, kInternal = 3 };

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string log_level = "warn";
  std::string out;
};

struct GraphOptions {
  std::string path;
  std::string weights = "probability";
  std::optional<double> beta;
  std::optional<double> p;

  void attach(CLI::App* cmd) {
    cmd->add_option("--graph", path, "Edge list: 'u v x' per line")->required()->check(CLI::ExistingFile);
    cmd->add_option("--weights", weights, "Meaning of x: probability or duration")
        ->check(CLI::IsMember({"probability", "duration"}));
    cmd->add_option("--beta", beta, "Transmissibility for duration weights: p = 1 - exp(-beta x)");
    cmd->add_option("--p", p, "Override every edge probability with this value");
  }

  pc::Graph load() const {
    auto mode = weights == "duration" ? pc::EdgeWeightMode::duration : pc::EdgeWeightMode::probability;
    pc::Graph g = pc::load_edge_list(path, mode, beta);
    if (p) g.set_homogeneous_probability(*p);
    return g;
  }
};

// Writes to --out when given, standard output otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw pc::InvalidInputError(fmt::format("cannot write '{}'", path));
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pc::InvalidInputError(fmt::format("cannot open '{}'", path));
  return in;
}

void write_costs(const std::string& path, const std::string& header, const std::string& row) {
  if (path.empty()) {
    std::cerr << header << '\n' << row << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw pc::InvalidInputError(fmt::format("cannot write '{}'", path));
  out << header << '\n' << row << '\n';
}

pc::Observation require_observation(const pc::PoolFile& file) {
  if (!file.observation) throw pc::InvalidInputError("pool file contains untested pools ('?')");
  return *file.observation;
}

pc::NodeId node_of(const pc::Graph& g, std::int64_t label) {
  auto v = g.node_of_label(label);
  if (!v) throw pc::InvalidInputError(fmt::format("unknown node label {}", label));
  return *v;
}

void configure_logging(const std::string& level) {
  auto logger = spdlog::stderr_color_mt("poolcascade");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(level));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum-likelihood cascade reconstruction from pooled test results"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for every random choice");
  app.add_option("--log-level", global.log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}));
  app.add_option("--out", global.out, "Output file (default: standard output)");

  // gen-graph
  auto* gen = app.add_subcommand("gen-graph", "Generate a random contact network");
  std::string gen_model = "ba";
  std::size_t gen_n = 1000, gen_m = 3;
  double gen_q = 0.02, gen_p = 0.05;
  gen->add_option("--model", gen_model, "ba or gnq")->check(CLI::IsMember({"ba", "gnq"}));
  gen->add_option("--n", gen_n, "Number of nodes");
  gen->add_option("--m", gen_m, "Edges per new node (ba)");
  gen->add_option("--q", gen_q, "Edge probability (gnq)");
  gen->add_option("--p", gen_p, "Transmission probability written on every edge");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate an independent cascade");
  GraphOptions sim_graph;
  sim_graph.attach(sim);
  std::string sim_model = "single-seed";
  std::optional<std::int64_t> sim_root;
  double sim_p0 = 0.05;
  sim->add_option("--model", sim_model, "single-seed or one-hop")->check(CLI::IsMember({"single-seed", "one-hop"}));
  sim->add_option("--root", sim_root, "Seed node label (single-seed; random when omitted)");
  sim->add_option("--p0", sim_p0, "Seeding probability (one-hop)");

  // pool
  auto* pool = app.add_subcommand("pool", "Design random pools and optionally test them against a cascade");
  GraphOptions pool_graph;
  pool_graph.attach(pool);
  double pool_ratio = 0.5, pool_fp = 0.0, pool_fn = 0.0;
  std::size_t pool_size = 5;
  std::string pool_cascade;
  bool pool_one_hop = false;
  pool->add_option("--ratio", pool_ratio, "Fraction of nodes placed in pools");
  pool->add_option("--size", pool_size, "Nodes per pool");
  pool->add_option("--cascade", pool_cascade, "Cascade file to evaluate the pools against")->check(CLI::ExistingFile);
  pool->add_flag("--one-hop", pool_one_hop, "Pool the target copies of a time-expanded network");
  pool->add_option("--fp", pool_fp, "False-positive rate applied to the results");
  pool->add_option("--fn", pool_fn, "False-negative rate applied to the results");

  // reconstruct / reconstruct-noisy share most options
  struct ReconstructFlags {
    GraphOptions graph;
    std::optional<std::int64_t> root;
    std::string pools;
    std::string method = "approx";
    int level = 2;
    bool all_roots = false;
    bool warn_assumption = false;
    std::string costs;
  };
  auto attach_reconstruct = [](CLI::App* cmd, ReconstructFlags& f) {
    f.graph.attach(cmd);
    cmd->add_option("--root", f.root, "Seed node label");
    cmd->add_option("--pools", f.pools, "Pool file with results")->required()->check(CLI::ExistingFile);
    cmd->add_option("--level", f.level, "Recursion depth of the Steiner solver")->check(CLI::PositiveNumber);
    cmd->add_flag("--warn-assumption", f.warn_assumption,
                  "Warn instead of failing when an edge probability exceeds 1/2");
    cmd->add_option("--costs", f.costs, "Write the cost CSV here (default: standard error)");
  };
  auto* rec = app.add_subcommand("reconstruct", "Reconstruct a single-seed cascade from pooled results");
  ReconstructFlags rec_flags;
  attach_reconstruct(rec, rec_flags);
  rec->add_option("--method", rec_flags.method, "approx, approx_random or approx_all")
      ->check(CLI::IsMember({"approx", "approx_random", "approx_all"}));
  rec->add_flag("--all-roots", rec_flags.all_roots, "Unknown seed: try every admissible root");

  auto* noisy = app.add_subcommand("reconstruct-noisy", "Reconstruct under false-positive/false-negative tests");
  ReconstructFlags noisy_flags;
  attach_reconstruct(noisy, noisy_flags);
  double noisy_fp = 0.0, noisy_fn = 0.0;
  bool noisy_prune = false;
  std::size_t noisy_max_pools = 16, noisy_max_hyp = 1u << 16;
  noisy->add_option("--fp", noisy_fp, "False-positive rate")->required();
  noisy->add_option("--fn", noisy_fn, "False-negative rate")->required();
  noisy->add_flag("--prune", noisy_prune, "Visit hypotheses by increasing penalty and stop early");
  noisy->add_option("--max-pools", noisy_max_pools, "Pool count allowed without --prune");
  noisy->add_option("--max-hypotheses", noisy_max_hyp, "Hypothesis budget with --prune");

  // reconstruct-onehop
  auto* onehop = app.add_subcommand("reconstruct-onehop", "Reconstruct a one-hop cascade by LP rounding");
  GraphOptions oh_graph;
  oh_graph.attach(onehop);
  std::string oh_pools, oh_method = "round", oh_costs, oh_lp;
  double oh_p0 = 0.05;
  std::size_t oh_retries = 100;
  onehop->add_option("--pools", oh_pools, "Pool file; members are target copies")->required()->check(CLI::ExistingFile);
  onehop->add_option("--p0", oh_p0, "Seeding probability")->required();
  onehop->add_option("--method", oh_method, "round or round_random")->check(CLI::IsMember({"round", "round_random"}));
  onehop->add_option("--max-retries", oh_retries, "Redraws before greedy repair");
  onehop->add_option("--costs", oh_costs, "Write the cost CSV here (default: standard error)");
  onehop->add_option("--lp-out", oh_lp, "Also write the relaxation in LP format");

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exact brute-force optimum on a small instance");
  GraphOptions orc_graph;
  orc_graph.attach(orc);
  std::string orc_kind = "pool", orc_pools, orc_costs;
  std::optional<std::int64_t> orc_root;
  double orc_p0 = 0.05;
  std::size_t orc_cap = 12;
  orc->add_option("--kind", orc_kind, "pool or one-hop")->check(CLI::IsMember({"pool", "one-hop"}));
  orc->add_option("--root", orc_root, "Seed node label (pool)");
  orc->add_option("--pools", orc_pools, "Pool file with results")->required()->check(CLI::ExistingFile);
  orc->add_option("--p0", orc_p0, "Seeding probability (one-hop)");
  orc->add_option("--n-cap", orc_cap, "Largest graph accepted (pool) or log2 enumeration budget (one-hop)");
  orc->add_option("--costs", orc_costs, "Write the optimal cost here (default: standard error)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a replicate experiment grid and write metrics CSV");
  std::string exp_config;
  std::optional<std::size_t> exp_threads;
  bool exp_print = false;
  exp->add_option("--config", exp_config, "key = value config file")->required()->check(CLI::ExistingFile);
  exp->add_option("--threads", exp_threads, "Worker threads (overrides the config)");
  exp->add_flag("--print-config", exp_print, "Write the resolved config instead of running");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    configure_logging(global.log_level);
    pc::Rng rng(global.seed);

    if (*gen) {
      if (!(gen_p >= 0.0 && gen_p <= 1.0)) throw pc::InvalidInputError("--p must lie in [0, 1]");
      pc::Graph g = gen_model == "ba" ? pc::generate_ba(gen_n, gen_m, rng) : pc::generate_gnq(gen_n, gen_q, rng);
      g.set_homogeneous_probability(gen_p);
      Output out(global.out);
      pc::write_edge_list(out.stream(), g);
      return kOk;
    }

    if (*sim) {
      pc::Graph g = sim_graph.load();
      Output out(global.out);
      if (sim_model == "single-seed") {
        pc::NodeId root;
        if (sim_root) {
          root = node_of(g, *sim_root);
        } else {
          std::uniform_int_distribution<pc::NodeId> pick(0, static_cast<pc::NodeId>(g.num_nodes()) - 1);
          root = pick(rng);
        }
        pc::Cascade c = pc::simulate_single_seed(g, root, rng);
        pc::write_cascade(out.stream(), c, {&g, nullptr});
      } else {
        pc::BipartiteExpansion bip = pc::time_expand(g);
        pc::Cascade c = pc::simulate_one_hop(bip, sim_p0, rng);
        pc::write_cascade(out.stream(), c, {&g, &bip});
      }
      return kOk;
    }

    if (*pool) {
      pc::Graph g = pool_graph.load();
      pc::BipartiteExpansion bip;
      pc::NodeLabels labels{&g, nullptr};
      std::vector<pc::NodeId> candidates;
      if (pool_one_hop) {
        bip = pc::time_expand(g);
        labels.expansion = &bip;
        for (std::size_t u = 0; u < g.num_nodes(); ++u) candidates.push_back(bip.target_copy(static_cast<pc::NodeId>(u)));
      } else {
        for (std::size_t u = 0; u < g.num_nodes(); ++u) candidates.push_back(static_cast<pc::NodeId>(u));
      }
      pc::PoolSet ps = pc::design_random_pools(candidates, pool_ratio, pool_size, rng);
      Output out(global.out);
      if (pool_cascade.empty()) {
        pc::write_pools(out.stream(), ps, nullptr, labels);
        return kOk;
      }
      auto in = open_input(pool_cascade);
      pc::Cascade c = pc::read_cascade(in, labels);
      pc::Observation obs = pc::evaluate_pools(ps, c.infected());
      pc::NoiseModel nm{pool_fp, pool_fn};
      nm.validate();
      if (pool_fp > 0.0 || pool_fn > 0.0) obs = pc::apply_noise(obs, nm, rng);
      pc::write_pools(out.stream(), ps, &obs, labels);
      return kOk;
    }

    if (*rec || *noisy) {
      ReconstructFlags& f = *rec ? rec_flags : noisy_flags;
      if (!f.root && !f.all_roots) {
        std::cerr << "--root is required" << (*rec ? " (or pass --all-roots)" : "") << "\n"
                  << (*rec ? rec : noisy)->help();
        return kUsage;
      }
      pc::Graph g = f.graph.load();
      pc::NodeLabels labels{&g, nullptr};
      auto in = open_input(f.pools);
      pc::PoolFile pf = pc::read_pools(in, labels);
      pc::Observation obs = require_observation(pf);
      pc::CostModel cm = pc::compute_costs(g);
      pc::ReconstructOptions options;
      options.level = f.level;
      options.assumption = f.warn_assumption ? pc::AssumptionPolicy::warn : pc::AssumptionPolicy::enforce;

      pc::ReconstructionResult res;
      if (*noisy) {
        pc::NoisyOptions no;
        no.base = options;
        no.prune = noisy_prune;
        no.max_pools = noisy_max_pools;
        no.max_hypotheses = noisy_max_hyp;
        res = pc::approx_cascade_noisy(g, cm, node_of(g, *f.root), pf.pools, obs, {noisy_fp, noisy_fn}, no);
      } else if (f.all_roots) {
        if (f.method != "approx") throw pc::InvalidInputError("--all-roots supports only --method approx");
        res = pc::approx_cascade_all_roots(g, cm, pf.pools, obs, options);
      } else if (f.method == "approx") {
        res = pc::approx_cascade(g, cm, node_of(g, *f.root), pf.pools, obs, options);
      } else if (f.method == "approx_random") {
        res = pc::baseline_random(g, cm, node_of(g, *f.root), pf.pools, obs, rng, options);
      } else {
        res = pc::baseline_all(g, cm, node_of(g, *f.root), pf.pools, obs, options);
      }
      Output out(global.out);
      pc::write_cascade(out.stream(), res.cascade, labels);
      std::string header = pc::CostBreakdown::csv_header() + ",gst_weight,noisy_penalty";
      std::string row = res.cost.csv_row() + fmt::format(",{:.12g},{:.12g}", res.gst_weight, res.noisy_penalty);
      write_costs(f.costs, header, row);
      return kOk;
    }

    if (*onehop) {
      pc::Graph g = oh_graph.load();
      pc::BipartiteExpansion bip = pc::time_expand(g);
      pc::NodeLabels labels{&g, &bip};
      auto in = open_input(oh_pools);
      pc::PoolFile pf = pc::read_pools(in, labels);
      pc::Observation obs = require_observation(pf);
      pc::CostModel cm = pc::compute_one_hop_costs(bip, oh_p0);
      pc::RoundOptions ro;
      ro.max_retries = oh_retries;
      pc::RoundingResult res;
      if (oh_method == "round") {
        pc::OneHopLp lp = pc::build_one_hop_lp(bip, cm, pf.pools, obs);
        if (!oh_lp.empty()) {
          std::ofstream lp_out(oh_lp);
          if (!lp_out) throw pc::InvalidInputError(fmt::format("cannot write '{}'", oh_lp));
          lp_out << lp.to_lp_format();
        }
        pc::LpSolution sol = pc::solve_lp(lp);
        res = pc::round_cascade(lp, sol, bip, cm, pf.pools, obs, rng, ro);
      } else {
        res = pc::one_hop_baseline_random(bip, cm, pf.pools, obs, rng, ro);
      }
      Output out(global.out);
      pc::write_cascade(out.stream(), res.cascade, labels);
      std::string header = pc::OneHopCostBreakdown::csv_header() + ",lp_objective,draws,repaired";
      std::string row = res.cost.csv_row() +
                        fmt::format(",{:.12g},{},{}", res.lp_objective, res.draws, res.repaired ? 1 : 0);
      write_costs(oh_costs, header, row);
      return kOk;
    }

    if (*orc) {
      pc::Graph g = orc_graph.load();
      Output out(global.out);
      if (orc_kind == "pool") {
        if (!orc_root) {
          std::cerr << "--root is required for --kind pool\n" << orc->help();
          return kUsage;
        }
        pc::NodeLabels labels{&g, nullptr};
        auto in = open_input(orc_pools);
        pc::PoolFile pf = pc::read_pools(in, labels);
        pc::Observation obs = require_observation(pf);
        pc::CostModel cm = pc::compute_costs(g);
        pc::OracleResult res = pc::brute_force_pool_mle(g, cm, node_of(g, *orc_root), pf.pools, obs, orc_cap);
        pc::write_cascade(out.stream(), res.optimal_cascade, labels);
        write_costs(orc_costs, "optimal_cost,enumerated",
                    fmt::format("{:.12g},{}", res.optimal_cost, res.instances_enumerated));
      } else {
        pc::BipartiteExpansion bip = pc::time_expand(g);
        pc::NodeLabels labels{&g, &bip};
        auto in = open_input(orc_pools);
        pc::PoolFile pf = pc::read_pools(in, labels);
        pc::Observation obs = require_observation(pf);
        pc::CostModel cm = pc::compute_one_hop_costs(bip, orc_p0);
        pc::OracleResult res = pc::brute_force_one_hop_mle(bip, cm, pf.pools, obs, orc_cap);
        pc::write_cascade(out.stream(), res.optimal_cascade, labels);
        write_costs(orc_costs, "optimal_cost,enumerated",
                    fmt::format("{:.12g},{}", res.optimal_cost, res.instances_enumerated));
      }
      return kOk;
    }

    if (*exp) {
      pc::ExperimentConfig cfg = pc::load_config(exp_config);
      if (exp_threads) cfg.threads = *exp_threads;
      Output out(global.out);
      if (exp_print) {
        pc::write_config(out.stream(), cfg);
        return kOk;
      }
      std::ostream& os = out.stream();
      os << "#schema=" << pc::kMetricsSchema << '\n' << pc::metrics_csv_header(cfg.record_time) << '\n';
      pc::run_experiment(cfg, [&](const pc::MetricRow& row) { os << pc::metrics_csv_row(row, cfg.record_time) << '\n'; });
      os.flush();
      return kOk;
    }
  } catch (const pc::InfeasibleError& e) {
    std::cout << "infeasible " << pc::to_string(e.reason()) << '\n';
    spdlog::error("{}", e.what());
    return kInfeasible;
  } catch (const pc::InternalError& e) {
    spdlog::critical("internal error: {}", e.what());
    return kInternal;
  } catch (const pc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    spdlog::critical("internal error: {}", e.what());
    return kInternal;
  }
  return kInternal;
}
