#include "poolcascade/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "poolcascade/errors.hpp"

namespace poolcascade {

int LinearProgram::add_variable(double cost) {
  objective.push_back(cost);
  return static_cast<int>(objective.size() - 1);
}

void LinearProgram::add_row(std::vector<std::pair<int, double>> terms, RowSense sense, double rhs) {
  for (const auto& [col, coef] : terms) {
    if (col < 0 || static_cast<std::size_t>(col) >= objective.size()) {
      throw InvalidInputError(fmt::format("row references unknown variable {}", col));
    }
    (void)coef;
  }
  rows.push_back({std::move(terms), sense, rhs});
}

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), a_(rows * (cols + 1), 0.0), cost_(cols + 1, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a_[i * (n_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * (n_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, n_); }
  double rhs(std::size_t i) const { return at(i, n_); }
  double& reduced(std::size_t j) { return cost_[j]; }
  /// Minus the current objective value.
  double& value() { return cost_[n_]; }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

  void pivot(std::size_t r, std::size_t c) {
    double* prow = &a_[r * (n_ + 1)];
    double inv = 1.0 / prow[c];
    for (std::size_t j = 0; j <= n_; ++j) prow[j] *= inv;
    prow[c] = 1.0;
    auto eliminate = [&](double* row) {
      double f = row[c];
      if (f == 0.0) return;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (prow[j] != 0.0) row[j] -= f * prow[j];
      }
      row[c] = 0.0;
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) eliminate(&a_[i * (n_ + 1)]);
    }
    eliminate(cost_.data());
  }

 private:
  std::size_t m_, n_;
  std::vector<double> a_;
  std::vector<double> cost_;
};

struct Layout {
  std::size_t structural = 0;
  std::size_t slack_begin = 0;
  std::size_t artificial_begin = 0;
  std::size_t total = 0;
  std::vector<double> sign;        // +1, or -1 when the row was negated
  std::vector<std::size_t> basis0;  // initial identity column per row
};

}  // namespace

LpResult DenseSimplex::solve(const LinearProgram& lp) const {
  const std::size_t m = lp.rows.size();
  const std::size_t n = lp.num_variables();
  const double tol = options_.tolerance;

  Layout lay;
  lay.structural = n;
  lay.sign.assign(m, 1.0);
  std::vector<RowSense> sense(m);
  std::size_t slacks = 0, artificials = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sense[i] = lp.rows[i].sense;
    if (lp.rows[i].rhs < 0.0) {
      lay.sign[i] = -1.0;
      if (sense[i] == RowSense::greater_equal) {
        sense[i] = RowSense::less_equal;
      } else if (sense[i] == RowSense::less_equal) {
        sense[i] = RowSense::greater_equal;
      }
    }
    if (sense[i] != RowSense::equal) ++slacks;
    if (sense[i] != RowSense::less_equal) ++artificials;
  }
  lay.slack_begin = n;
  lay.artificial_begin = n + slacks;
  lay.total = n + slacks + artificials;

  Tableau t(m, lay.total);
  std::vector<std::size_t> basis(m);
  lay.basis0.resize(m);
  std::size_t next_slack = lay.slack_begin, next_art = lay.artificial_begin;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    for (const auto& [col, coef] : row.terms) t.at(i, static_cast<std::size_t>(col)) += lay.sign[i] * coef;
    t.rhs(i) = lay.sign[i] * row.rhs;
    if (sense[i] == RowSense::less_equal) {
      t.at(i, next_slack) = 1.0;
      basis[i] = lay.basis0[i] = next_slack++;
    } else {
      if (sense[i] == RowSense::greater_equal) t.at(i, next_slack++) = -1.0;
      t.at(i, next_art) = 1.0;
      basis[i] = lay.basis0[i] = next_art++;
    }
  }

  LpResult result;
  bool use_bland = false;
  std::size_t degenerate_run = 0;

  auto is_artificial = [&](std::size_t j) { return j >= lay.artificial_begin; };

  // Returns false when no improving column exists; sets `unbounded` when a
  // column improves without limit.
  auto run = [&](bool allow_artificial, bool& unbounded) -> bool {
    unbounded = false;
    while (true) {
      if (result.pivots >= options_.max_pivots) return false;
      std::size_t enter = lay.total;
      double best = -tol;
      for (std::size_t j = 0; j < lay.total; ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        double r = t.reduced(j);
        if (r < best) {
          enter = j;
          best = r;
          if (use_bland) break;
        }
      }
      if (enter == lay.total) return true;

      std::size_t leave = m;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        double a = t.at(i, enter);
        if (a <= tol) continue;
        double q = t.rhs(i) / a;
        if (leave == m || q < ratio - tol || (q <= ratio + tol && basis[i] < basis[leave])) {
          leave = i;
          ratio = q;
        }
      }
      if (leave == m) {
        unbounded = true;
        return true;
      }
      if (ratio <= tol) {
        if (++degenerate_run >= options_.degenerate_switch) use_bland = true;
      } else {
        degenerate_run = 0;
      }
      t.pivot(leave, enter);
      basis[leave] = enter;
      ++result.pivots;
    }
  };

  // Phase 1: minimize the sum of artificials.
  if (artificials > 0) {
    for (std::size_t j = lay.artificial_begin; j < lay.total; ++j) t.reduced(j) = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_artificial(basis[i])) continue;
      for (std::size_t j = 0; j <= lay.total; ++j) t.reduced(j) -= t.at(i, j);
    }
    bool unbounded = false;
    if (!run(true, unbounded)) {
      result.status = LpStatus::iteration_limit;
      return result;
    }
    double infeasibility = -t.value();
    double scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(lp.rows[i].rhs));
    if (infeasibility > 1e-7 * scale) {
      result.status = LpStatus::infeasible;
      return result;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_artificial(basis[i])) continue;
      for (std::size_t j = 0; j < lay.artificial_begin; ++j) {
        if (std::abs(t.at(i, j)) > tol) {
          t.pivot(i, j);
          basis[i] = j;
          ++result.pivots;
          break;
        }
      }
    }
  }

  // Phase 2 reduced costs from scratch.
  for (std::size_t j = 0; j <= lay.total; ++j) t.reduced(j) = j < n ? lp.objective[j] : 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double cb = basis[i] < n ? lp.objective[basis[i]] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= lay.total; ++j) t.reduced(j) -= cb * t.at(i, j);
  }
  use_bland = false;
  degenerate_run = 0;
  bool unbounded = false;
  if (!run(false, unbounded)) {
    result.status = LpStatus::iteration_limit;
    return result;
  }
  if (unbounded) {
    result.status = LpStatus::unbounded;
    return result;
  }

  result.status = LpStatus::optimal;
  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) result.x[basis[i]] = std::max(0.0, t.rhs(i));
  }
  double obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * result.x[j];
  result.objective = obj;
  result.duals.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    // The initial identity column has zero cost, so its reduced cost is -y_i.
    result.duals[i] = -lay.sign[i] * t.reduced(lay.basis0[i]);
  }
  return result;
}

}  // namespace poolcascade
