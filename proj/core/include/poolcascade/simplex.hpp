#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

namespace poolcascade {

enum class RowSense { greater_equal, less_equal, equal };

/// minimize c^T x  subject to  rows,  x >= 0.
struct LinearProgram {
  struct Row {
    std::vector<std::pair<int, double>> terms;
    RowSense sense = RowSense::greater_equal;
    double rhs = 0.0;
  };

  std::vector<double> objective;
  std::vector<Row> rows;

  std::size_t num_variables() const { return objective.size(); }
  int add_variable(double cost);
  void add_row(std::vector<std::pair<int, double>> terms, RowSense sense, double rhs);
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  /// One multiplier per row, signed so that c - A^T y >= 0 at optimality
  /// (y >= 0 on >= rows, y <= 0 on <= rows).
  std::vector<double> duals;
  double objective = 0.0;
  std::size_t pivots = 0;
};

class LpSolver {
 public:
  virtual ~LpSolver() = default;
  virtual LpResult solve(const LinearProgram& lp) const = 0;
};

/// Dense two-phase tableau simplex. Entering columns follow Dantzig's rule;
/// after a run of degenerate pivots the solver switches to Bland's rule,
/// which cannot cycle.
class DenseSimplex final : public LpSolver {
 public:
  struct Options {
    double tolerance = 1e-9;
    std::size_t max_pivots = 1'000'000;
    std::size_t degenerate_switch = 50;
  };

  DenseSimplex() = default;
  explicit DenseSimplex(Options options) : options_(options) {}

  LpResult solve(const LinearProgram& lp) const override;

 private:
  Options options_;
};

}  // namespace poolcascade
