#pragma once

// Dense two-phase primal simplex for   min c.x  s.t.  A x = b, x >= 0.
// Internal to the geometry oracles; not a general-purpose solver.

#include <Eigen/Dense>

#include <vector>

namespace qrange::lp {

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Options {
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-9;
  long max_iterations = 200000;
  // Consecutive degenerate pivots before switching from the steepest
  // reduced cost to Bland's rule.
  int degenerate_switch = 50;
};

struct Result {
  Status status = Status::infeasible;
  Eigen::VectorXd x;          // primal solution (optimal only)
  double objective = 0.0;
  /// Phase-one optimum: total artificial infeasibility.
  double infeasibility = 0.0;
  /// Dual multipliers y of the final basis for the rows of A. For an
  /// infeasible problem these are the phase-one multipliers, a Farkas
  /// certificate: A^T y <= 0 and b.y = infeasibility > 0.
  Eigen::VectorXd duals;
  std::vector<Eigen::Index> basis;
  long iterations = 0;
};

Result solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
             const Options& options = {});

}  // namespace qrange::lp
