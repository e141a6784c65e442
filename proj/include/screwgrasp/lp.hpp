#pragma once

#include <Eigen/Dense>

namespace screwgrasp {

enum class LpStatus { optimal, infeasible, unbounded };

// maximize objective . x
// subject to eq_matrix x = eq_rhs, ub_matrix x <= ub_rhs, x >= lower_bounds
// (a lower bound of -infinity leaves the variable free).
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ub_matrix;
  Eigen::VectorXd ub_rhs;
  Eigen::VectorXd lower_bounds;

  int num_vars() const { return static_cast<int>(objective.size()); }

  // n variables, no constraints yet, lower bounds all zero.
  static LinearProgram with_vars(int n);
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;
  double objective_value = 0.0;

  // Dual certificate, meaningful when status is optimal: eq_duals free,
  // ub_duals >= 0, and objective_value = eq_duals.eq_rhs + ub_duals.ub_rhs
  // - reduced_costs.lower_bounds with reduced costs recoverable as
  // A_eq^T eq_duals + A_ub^T ub_duals - objective.
  Eigen::VectorXd eq_duals;
  Eigen::VectorXd ub_duals;
};

// Two-phase dense simplex.  Deterministic: identical inputs give bit-identical
// outputs.  Pivoting is most-negative-reduced-cost with a permanent switch to
// Bland's rule after a stall, so cycling terminates.  A required pivot smaller
// than 1e-11 raises numerical_breakdown; inconsistent dimensions raise
// dimension_mismatch.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace screwgrasp
