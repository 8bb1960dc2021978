#include "poolcascade/one_hop.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "poolcascade/errors.hpp"

namespace poolcascade {

OneHopLp build_one_hop_lp(const BipartiteExpansion& bip, const CostModel& cm, const PoolSet& ps,
                          const Observation& obs) {
  if (obs.size() != ps.size()) {
    throw InvalidInputError(fmt::format("observation has {} outcomes for {} pools", obs.size(), ps.size()));
  }
  if (cm.inclusion.size() != bip.num_arcs() || cm.seeding.size() != bip.num_nodes()) {
    throw InvalidInputError("cost model does not match the bipartite instance");
  }
  for (const auto& pool : ps.pools) {
    for (NodeId v : pool) {
      if (!bip.is_target(v)) throw InvalidInputError(fmt::format("pool member {} is not a target node", v));
    }
  }

  const std::size_t n = bip.num_nodes();
  NodeMask s0 = negative_mask(ps, obs, n);
  NodeMask wanted(n, 0);
  for (int gi : obs.gamma1()) {
    for (NodeId v : ps.pools[static_cast<std::size_t>(gi)]) {
      if (!s0[static_cast<std::size_t>(v)]) wanted[static_cast<std::size_t>(v)] = 1;
    }
  }

  OneHopLp lp;
  lp.num_positive_pools = obs.num_positive();
  lp.live_index_of_arc.assign(bip.num_arcs(), -1);
  lp.seed_index_of_node.assign(n, -1);

  // A source gets a column only if it can be seeded and either reaches a
  // wanted target or is cheaper seeded than not.
  for (std::size_t s = 0; s < bip.num_sources(); ++s) {
    if (!std::isfinite(cm.seeding[s])) continue;
    bool useful = false;
    double seeded_cost = cm.a(static_cast<NodeId>(s)) - cm.b(static_cast<NodeId>(s));
    for (int a : bip.out_arcs(static_cast<NodeId>(s))) {
      if (wanted[static_cast<std::size_t>(bip.arc(a).target)]) useful = true;
      seeded_cost += cm.d(a);
    }
    useful = useful || seeded_cost < 0.0;
    if (!useful) continue;
    lp.seed_index_of_node[s] = static_cast<int>(lp.seed_vars.size());
    lp.seed_vars.push_back(static_cast<NodeId>(s));
  }
  for (std::size_t xi = 0; xi < lp.seed_vars.size(); ++xi) {
    for (int a : bip.out_arcs(lp.seed_vars[xi])) {
      if (wanted[static_cast<std::size_t>(bip.arc(a).target)]) {
        lp.live_index_of_arc[static_cast<std::size_t>(a)] = static_cast<int>(lp.live_vars.size());
        lp.live_vars.push_back(a);
        lp.live_owner.push_back(static_cast<int>(xi));
      }
    }
  }
  for (std::size_t xi = 0; xi < lp.seed_vars.size(); ++xi) {
    for (int a : bip.out_arcs(lp.seed_vars[xi])) {
      lp.fail_vars.push_back(a);
      lp.fail_owner.push_back(static_cast<int>(xi));
    }
  }

  auto& prog = lp.program;
  for (NodeId s : lp.seed_vars) prog.add_variable(cm.a(s) - cm.b(s));
  for (int a : lp.live_vars) prog.add_variable(cm.c(a));
  for (int a : lp.fail_vars) prog.add_variable(cm.d(a));

  for (int gi : obs.gamma1()) {
    std::vector<std::pair<int, double>> terms;
    for (NodeId v : ps.pools[static_cast<std::size_t>(gi)]) {
      if (s0[static_cast<std::size_t>(v)]) continue;
      for (int a : bip.in_arcs(v)) {
        int yi = lp.live_index_of_arc[static_cast<std::size_t>(a)];
        if (yi >= 0) terms.emplace_back(lp.y_col(static_cast<std::size_t>(yi)), 1.0);
      }
    }
    if (terms.empty()) {
      throw InfeasibleError(InfeasibleReason::lp_infeasible,
                            fmt::format("positive pool {} has no admissible incoming arc", gi));
    }
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    prog.add_row(std::move(terms), RowSense::greater_equal, 1.0);
    lp.row_kinds.push_back(OneHopLp::RowKind::cover);
    lp.cover_pool.push_back(gi);
  }
  for (std::size_t yi = 0; yi < lp.live_vars.size(); ++yi) {
    prog.add_row({{lp.x_col(static_cast<std::size_t>(lp.live_owner[yi])), 1.0}, {lp.y_col(yi), -1.0}},
                 RowSense::greater_equal, 0.0);
    lp.row_kinds.push_back(OneHopLp::RowKind::linkage);
  }
  for (std::size_t zi = 0; zi < lp.fail_vars.size(); ++zi) {
    prog.add_row({{lp.z_col(zi), 1.0}, {lp.x_col(static_cast<std::size_t>(lp.fail_owner[zi])), -1.0}},
                 RowSense::greater_equal, 0.0);
    lp.row_kinds.push_back(OneHopLp::RowKind::non_infection);
  }

  std::vector<double> b_terms;
  for (std::size_t s = 0; s < bip.num_sources(); ++s) b_terms.push_back(cm.b(static_cast<NodeId>(s)));
  std::sort(b_terms.begin(), b_terms.end());
  for (double b : b_terms) lp.constant += b;
  return lp;
}

std::string OneHopLp::to_lp_format() const {
  auto name = [&](int col) {
    auto c = static_cast<std::size_t>(col);
    if (c < seed_vars.size()) return fmt::format("x{}", seed_vars[c]);
    c -= seed_vars.size();
    if (c < live_vars.size()) return fmt::format("y{}", live_vars[c]);
    c -= live_vars.size();
    return fmt::format("z{}", fail_vars[c]);
  };
  auto term = [&](double coef, int col, bool first) {
    std::string sign = coef < 0 ? "- " : (first ? "" : "+ ");
    return fmt::format("{}{:.17g} {}", sign, std::abs(coef), name(col));
  };
  std::ostringstream out;
  out << "\\ one-hop relaxation; add constant " << fmt::format("{:.17g}", constant) << " to the objective\n";
  out << "Minimize\n obj:";
  for (std::size_t j = 0; j < program.num_variables(); ++j) {
    out << ' ' << term(program.objective[j], static_cast<int>(j), j == 0);
  }
  if (program.num_variables() == 0) out << " 0 x_empty";
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < program.rows.size(); ++i) {
    const auto& row = program.rows[i];
    out << " r" << i << ':';
    for (std::size_t t = 0; t < row.terms.size(); ++t) {
      out << ' ' << term(row.terms[t].second, row.terms[t].first, t == 0);
    }
    const char* op = row.sense == RowSense::greater_equal ? ">=" : row.sense == RowSense::less_equal ? "<=" : "=";
    out << ' ' << op << ' ' << fmt::format("{:.17g}", row.rhs) << '\n';
  }
  out << "End\n";
  return out.str();
}

LpSolution solve_lp(const OneHopLp& lp, const LpSolver& solver) {
  const std::size_t nx = lp.seed_vars.size();
  const std::size_t ny = lp.live_vars.size();
  const std::size_t nz = lp.fail_vars.size();

  // z_ij only appears in z_ij - x_i >= 0 with cost d_ij >= 0, so z = x at
  // every optimum; fold d into the x cost and drop z and its rows.
  LinearProgram reduced;
  for (std::size_t i = 0; i < nx; ++i) reduced.add_variable(lp.program.objective[static_cast<std::size_t>(lp.x_col(i))]);
  for (std::size_t zi = 0; zi < nz; ++zi) {
    reduced.objective[static_cast<std::size_t>(lp.fail_owner[zi])] +=
        lp.program.objective[static_cast<std::size_t>(lp.z_col(zi))];
  }
  for (std::size_t yi = 0; yi < ny; ++yi) reduced.add_variable(lp.program.objective[static_cast<std::size_t>(lp.y_col(yi))]);
  std::size_t kept_rows = 0;
  for (std::size_t r = 0; r < lp.program.rows.size(); ++r) {
    if (lp.row_kinds[r] == OneHopLp::RowKind::non_infection) continue;
    reduced.rows.push_back(lp.program.rows[r]);
    ++kept_rows;
  }

  LpResult res = solver.solve(reduced);
  switch (res.status) {
    case LpStatus::optimal:
      break;
    case LpStatus::infeasible:
      throw InfeasibleError(InfeasibleReason::lp_infeasible, "the one-hop relaxation has no feasible point");
    case LpStatus::unbounded:
      throw InternalError("one-hop relaxation reported unbounded despite nonnegative costs");
    case LpStatus::iteration_limit:
      throw InternalError("simplex pivot limit reached on the one-hop relaxation");
  }

  LpSolution sol;
  sol.x.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(nx));
  sol.y.assign(res.x.begin() + static_cast<std::ptrdiff_t>(nx), res.x.end());
  sol.z.resize(nz);
  for (std::size_t zi = 0; zi < nz; ++zi) sol.z[zi] = sol.x[static_cast<std::size_t>(lp.fail_owner[zi])];
  sol.duals.assign(lp.program.rows.size(), 0.0);
  std::size_t k = 0;
  for (std::size_t r = 0; r < lp.program.rows.size(); ++r) {
    if (lp.row_kinds[r] == OneHopLp::RowKind::non_infection) continue;
    sol.duals[r] = res.duals[k++];
  }
  for (std::size_t zi = 0; zi < nz; ++zi) {
    std::size_t r = kept_rows + zi;
    sol.duals[r] = lp.program.objective[static_cast<std::size_t>(lp.z_col(zi))];
  }
  sol.objective = res.objective + lp.constant;
  sol.pivots = res.pivots;
  return sol;
}

LpSolution solve_lp(const OneHopLp& lp) { return solve_lp(lp, DenseSimplex{}); }

double rounding_scale(std::size_t num_positive_pools) {
  return num_positive_pools <= 1 ? 1.0 : 1.0 + std::log(static_cast<double>(num_positive_pools));
}

namespace {

double assignment_objective(const RoundedAssignment& r, const BipartiteExpansion& bip, const CostModel& cm) {
  std::vector<double> terms;
  for (std::size_t s = 0; s < bip.num_sources(); ++s) {
    if (r.seeded[s]) terms.push_back(cm.a(static_cast<NodeId>(s)) - cm.b(static_cast<NodeId>(s)));
  }
  for (std::size_t a = 0; a < bip.num_arcs(); ++a) {
    if (r.live[a]) terms.push_back(cm.c(static_cast<EdgeId>(a)));
    if (r.failed[a]) terms.push_back(cm.d(static_cast<EdgeId>(a)));
  }
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

}  // namespace

RoundedAssignment round_once(const OneHopLp& lp, const LpSolution& sol, const BipartiteExpansion& bip,
                             const CostModel& cm, double alpha, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RoundedAssignment r;
  r.seeded.assign(bip.num_sources(), 0);
  r.live.assign(bip.num_arcs(), 0);
  r.failed.assign(bip.num_arcs(), 0);
  for (std::size_t s = 0; s < bip.num_sources(); ++s) {
    double tau = unit(rng);
    int xi = lp.seed_index_of_node[s];
    if (xi < 0) continue;
    if (alpha * sol.x[static_cast<std::size_t>(xi)] > tau) r.seeded[s] = 1;
    for (int a : bip.out_arcs(static_cast<NodeId>(s))) {
      int yi = lp.live_index_of_arc[static_cast<std::size_t>(a)];
      if (yi >= 0 && alpha * sol.y[static_cast<std::size_t>(yi)] > tau) {
        r.live[static_cast<std::size_t>(a)] = 1;
        r.seeded[s] = 1;
      }
    }
    for (int a : bip.out_arcs(static_cast<NodeId>(s))) {
      r.failed[static_cast<std::size_t>(a)] = r.seeded[s] && !r.live[static_cast<std::size_t>(a)];
    }
  }
  r.objective = assignment_objective(r, bip, cm);
  return r;
}

namespace {

std::vector<NodeId> assignment_infected(const RoundedAssignment& r, const BipartiteExpansion& bip) {
  std::vector<NodeId> infected;
  for (std::size_t s = 0; s < bip.num_sources(); ++s) {
    if (r.seeded[s]) infected.push_back(static_cast<NodeId>(s));
  }
  for (std::size_t a = 0; a < bip.num_arcs(); ++a) {
    if (r.live[a]) infected.push_back(bip.arc(static_cast<int>(a)).target);
  }
  std::sort(infected.begin(), infected.end());
  infected.erase(std::unique(infected.begin(), infected.end()), infected.end());
  return infected;
}

}  // namespace

bool assignment_feasible(const RoundedAssignment& r, const BipartiteExpansion& bip, const PoolSet& ps,
                         const Observation& obs) {
  return is_consistent(assignment_infected(r, bip), obs, ps);
}

Cascade assignment_to_cascade(const RoundedAssignment& r, const BipartiteExpansion& bip) {
  std::vector<NodeId> seeds;
  for (std::size_t s = 0; s < bip.num_sources(); ++s) {
    if (r.seeded[s]) seeds.push_back(static_cast<NodeId>(s));
  }
  std::vector<Arc> live;
  for (std::size_t a = 0; a < bip.num_arcs(); ++a) {
    if (r.live[a]) live.emplace_back(bip.arc(static_cast<int>(a)).source, bip.arc(static_cast<int>(a)).target);
  }
  return Cascade::one_hop(std::move(seeds), std::move(live));
}

RoundingResult round_cascade(const OneHopLp& lp, const LpSolution& sol, const BipartiteExpansion& bip,
                             const CostModel& cm, const PoolSet& ps, const Observation& obs, Rng& rng,
                             const RoundOptions& options) {
  const double alpha = options.alpha > 0.0 ? options.alpha : rounding_scale(lp.num_positive_pools);
  RoundingResult out;
  out.lp_objective = sol.objective;
  RoundedAssignment r;
  bool ok = false;
  for (std::size_t draw = 0; draw <= options.max_retries; ++draw) {
    r = round_once(lp, sol, bip, cm, alpha, rng);
    ++out.draws;
    if (assignment_feasible(r, bip, ps, obs)) {
      ok = true;
      break;
    }
  }

  if (!ok) {
    out.repaired = true;
    NodeMask s0 = negative_mask(ps, obs, bip.num_nodes());
    for (std::size_t row = 0; row < lp.cover_pool.size(); ++row) {
      const auto& pool = ps.pools[static_cast<std::size_t>(lp.cover_pool[row])];
      bool covered = std::any_of(pool.begin(), pool.end(), [&](NodeId v) {
        for (int a : bip.in_arcs(v)) {
          if (r.live[static_cast<std::size_t>(a)]) return true;
        }
        return false;
      });
      if (covered) continue;
      int best_arc = -1;
      double best_cost = kInfinity;
      for (NodeId v : pool) {
        if (s0[static_cast<std::size_t>(v)]) continue;
        for (int a : bip.in_arcs(v)) {
          if (lp.live_index_of_arc[static_cast<std::size_t>(a)] < 0) continue;
          NodeId s = bip.arc(a).source;
          double marginal = cm.c(a) - cm.d(a);
          if (!r.seeded[static_cast<std::size_t>(s)]) {
            marginal += cm.a(s) - cm.b(s);
            for (int o : bip.out_arcs(s)) marginal += cm.d(o);
          }
          if (marginal < best_cost || (marginal == best_cost && a < best_arc)) {
            best_cost = marginal;
            best_arc = a;
          }
        }
      }
      if (best_arc < 0) {
        throw InfeasibleError(InfeasibleReason::lp_infeasible,
                              fmt::format("positive pool {} cannot be covered", lp.cover_pool[row]));
      }
      NodeId s = bip.arc(best_arc).source;
      if (!r.seeded[static_cast<std::size_t>(s)]) {
        r.seeded[static_cast<std::size_t>(s)] = 1;
        for (int o : bip.out_arcs(s)) r.failed[static_cast<std::size_t>(o)] = 1;
      }
      r.live[static_cast<std::size_t>(best_arc)] = 1;
      r.failed[static_cast<std::size_t>(best_arc)] = 0;
    }
    r.objective = assignment_objective(r, bip, cm);
    if (!assignment_feasible(r, bip, ps, obs)) {
      throw InternalError("repaired one-hop assignment is still inconsistent");
    }
  }

  out.cascade = assignment_to_cascade(r, bip);
  out.cost = one_hop_cost(out.cascade, bip, cm);
  return out;
}

RoundingResult reconstruct_one_hop(const BipartiteExpansion& bip, const CostModel& cm, const PoolSet& ps,
                                   const Observation& obs, Rng& rng, const RoundOptions& options) {
  OneHopLp lp = build_one_hop_lp(bip, cm, ps, obs);
  LpSolution sol = solve_lp(lp);
  return round_cascade(lp, sol, bip, cm, ps, obs, rng, options);
}

RoundingResult one_hop_baseline_random(const BipartiteExpansion& bip, const CostModel& cm, const PoolSet& ps,
                                       const Observation& obs, Rng& rng, const RoundOptions& options) {
  if (obs.size() != ps.size()) {
    throw InvalidInputError(fmt::format("observation has {} outcomes for {} pools", obs.size(), ps.size()));
  }
  NodeMask s0 = negative_mask(ps, obs, bip.num_nodes());
  PoolSet reduced;
  Observation reduced_obs;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!obs.positive[i]) {
      reduced.pools.push_back(ps.pools[i]);
      reduced_obs.positive.push_back(false);
      continue;
    }
    std::vector<NodeId> admissible;
    for (NodeId v : ps.pools[i]) {
      if (!s0[static_cast<std::size_t>(v)]) admissible.push_back(v);
    }
    if (admissible.empty()) {
      throw InfeasibleError(InfeasibleReason::lp_infeasible,
                            fmt::format("positive pool {} lies entirely inside negative pools", i));
    }
    std::uniform_int_distribution<std::size_t> pick(0, admissible.size() - 1);
    reduced.pools.push_back({admissible[pick(rng)]});
    reduced_obs.positive.push_back(true);
  }
  RoundingResult out = reconstruct_one_hop(bip, cm, reduced, reduced_obs, rng, options);
  return out;
}

}  // namespace poolcascade
