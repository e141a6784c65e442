#include "screwgrasp/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "screwgrasp/errors.hpp"

namespace screwgrasp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kReducedCostTol = 1e-9;
constexpr int kStallLimit = 64;
constexpr int kIterationLimit = 100000;

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Tableau {
  MatrixXd rows;  // m x (cols + 1), last column is the rhs
  VectorXd obj;   // reduced-cost row, zero on basic columns
  double obj_value = 0.0;
  std::vector<int> basis;  // basic column per row
  int cols = 0;

  double rhs(int i) const { return rows(i, cols); }

  void pivot(int row, int col) {
    rows.row(row) /= rows(row, col);
    for (int i = 0; i < rows.rows(); ++i) {
      if (i == row) continue;
      double f = rows(i, col);
      if (f != 0.0) rows.row(i) -= f * rows.row(row);
    }
    double g = obj[col];
    if (g != 0.0) {
      obj -= g * rows.row(row).head(cols).transpose();
      obj_value -= g * rhs(row);
    }
    obj[col] = 0.0;  // exact, instead of the rounding residue
    basis[row] = col;
  }
};

// Simplex iterations on the current objective row.  `eligible(col)` gates
// entering columns (keeps artificials out in phase 2).  Entering rule is
// most-negative reduced cost, switching permanently to Bland's least-index
// rule after kStallLimit non-improving pivots, which guarantees termination.
template <typename Eligible>
LpStatus run_simplex(Tableau& t, const Eligible& eligible) {
  const int m = static_cast<int>(t.rows.rows());
  bool bland = false;
  int stall = 0;
  double last_value = t.obj_value;

  for (int iter = 0; iter < kIterationLimit; ++iter) {
    int enter = -1;
    if (bland) {
      for (int j = 0; j < t.cols; ++j)
        if (eligible(j) && t.obj[j] < -kReducedCostTol) {
          enter = j;
          break;
        }
    } else {
      double most = -kReducedCostTol;
      for (int j = 0; j < t.cols; ++j)
        if (eligible(j) && t.obj[j] < most) {
          most = t.obj[j];
          enter = j;
        }
    }
    if (enter < 0) return LpStatus::optimal;

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    double best_small = 0.0;
    for (int i = 0; i < m; ++i) {
      double a = t.rows(i, enter);
      if (a <= kPivotTol) {
        best_small = std::max(best_small, a);
        continue;
      }
      double ratio = t.rhs(i) / a;
      if (ratio < best_ratio ||
          (ratio == best_ratio && leave >= 0 && t.basis[i] < t.basis[leave])) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave < 0) {
      if (best_small > 0.0)
        raise(Errc::numerical_breakdown, "pivot column has no entry above the pivot tolerance");
      return LpStatus::unbounded;
    }

    t.pivot(leave, enter);

    if (t.obj_value - last_value < 1e-13) {
      if (++stall >= kStallLimit) bland = true;
    } else {
      stall = 0;
      last_value = t.obj_value;
    }
  }
  raise(Errc::numerical_breakdown, "iteration limit exceeded");
}

}  // namespace

LinearProgram LinearProgram::with_vars(int n) {
  LinearProgram lp;
  lp.objective = VectorXd::Zero(n);
  lp.lower_bounds = VectorXd::Zero(n);
  return lp;
}

LpSolution solve_lp(const LinearProgram& lp) {
  const int n = lp.num_vars();
  const int me = static_cast<int>(lp.eq_rhs.size());
  const int mu = static_cast<int>(lp.ub_rhs.size());
  const int m = me + mu;

  if (lp.lower_bounds.size() != n)
    raise(Errc::dimension_mismatch, "lower_bounds size != objective size");
  if ((me > 0 && (lp.eq_matrix.rows() != me || lp.eq_matrix.cols() != n)) ||
      (me == 0 && lp.eq_matrix.size() != 0))
    raise(Errc::dimension_mismatch, "eq_matrix shape mismatch");
  if ((mu > 0 && (lp.ub_matrix.rows() != mu || lp.ub_matrix.cols() != n)) ||
      (mu == 0 && lp.ub_matrix.size() != 0))
    raise(Errc::dimension_mismatch, "ub_matrix shape mismatch");
  if (!lp.objective.allFinite() || !lp.eq_matrix.allFinite() || !lp.eq_rhs.allFinite() ||
      !lp.ub_matrix.allFinite() || !lp.ub_rhs.allFinite())
    raise(Errc::invalid_argument, "non-finite entry in program data");
  for (int j = 0; j < n; ++j)
    if (std::isnan(lp.lower_bounds[j]) ||
        lp.lower_bounds[j] == std::numeric_limits<double>::infinity())
      raise(Errc::invalid_argument, "lower bound must be finite or -infinity");

  // Shift bounded variables to zero lower bound; split free ones into +/-.
  std::vector<int> col_plus(n), col_minus(n, -1);
  VectorXd shift = VectorXd::Zero(n);
  int ns = 0;
  for (int j = 0; j < n; ++j) {
    col_plus[j] = ns++;
    if (std::isinf(lp.lower_bounds[j]))
      col_minus[j] = ns++;
    else
      shift[j] = lp.lower_bounds[j];
  }

  const int total_cols = ns + mu + m;  // structural + slack + artificial
  const int art0 = ns + mu;

  Tableau t;
  t.cols = total_cols;
  t.rows = MatrixXd::Zero(m, total_cols + 1);
  t.basis.assign(m, -1);

  auto fill_row = [&](int row, const auto& coeffs, double rhs) {
    for (int j = 0; j < n; ++j) {
      double a = coeffs(j);
      if (a == 0.0) continue;
      t.rows(row, col_plus[j]) = a;
      if (col_minus[j] >= 0) t.rows(row, col_minus[j]) = -a;
      rhs -= a * shift[j];
    }
    t.rows(row, total_cols) = rhs;
  };

  for (int i = 0; i < me; ++i) fill_row(i, lp.eq_matrix.row(i), lp.eq_rhs[i]);
  for (int i = 0; i < mu; ++i) {
    fill_row(me + i, lp.ub_matrix.row(i), lp.ub_rhs[i]);
    t.rows(me + i, ns + i) = 1.0;  // slack
  }

  std::vector<double> row_sign(m, 1.0);
  for (int i = 0; i < m; ++i)
    if (t.rhs(i) < 0.0) {
      t.rows.row(i) *= -1.0;
      row_sign[i] = -1.0;
    }

  // Slack starts basic where it forms an identity column; everything else
  // (all equality rows, sign-flipped inequality rows) gets an artificial.
  std::vector<bool> has_artificial(m, false);
  for (int i = 0; i < m; ++i) {
    if (i >= me && row_sign[i] > 0.0) {
      t.basis[i] = ns + (i - me);
    } else {
      t.rows(i, art0 + i) = 1.0;
      t.basis[i] = art0 + i;
      has_artificial[i] = true;
    }
  }

  double rhs_scale = 1.0;
  for (int i = 0; i < m; ++i) rhs_scale = std::max(rhs_scale, std::abs(t.rhs(i)));

  bool phase1_needed = false;
  for (int i = 0; i < m; ++i) phase1_needed = phase1_needed || has_artificial[i];

  if (phase1_needed) {
    // Phase 1: maximize -(sum of artificial variables), reduced costs
    // pre-eliminated against the identity start basis.
    t.obj = VectorXd::Zero(total_cols);
    t.obj_value = 0.0;
    for (int i = 0; i < m; ++i) {
      if (!has_artificial[i]) continue;
      t.obj -= t.rows.row(i).head(total_cols).transpose();
      t.obj_value -= t.rhs(i);
      t.obj[art0 + i] += 1.0;
    }

    LpStatus st = run_simplex(t, [](int) { return true; });
    if (st == LpStatus::unbounded)
      raise(Errc::numerical_breakdown, "phase 1 reported unbounded");
    if (t.obj_value < -1e-8 * rhs_scale) return {LpStatus::infeasible, {}, 0.0, {}, {}};

    // Pivot surviving zero-valued artificials out where a real coefficient
    // exists; a row without one is redundant and its artificial stays basic
    // at zero, where ineligibility keeps it inert.
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < art0) continue;
      for (int j = 0; j < art0; ++j)
        if (std::abs(t.rows(i, j)) > kPivotTol) {
          t.pivot(i, j);
          break;
        }
    }
  }

  // Phase 2 objective row: -c over standard-form columns, then eliminate
  // basic columns so reduced costs match the current basis.
  t.obj = VectorXd::Zero(total_cols);
  for (int j = 0; j < n; ++j) {
    t.obj[col_plus[j]] = -lp.objective[j];
    if (col_minus[j] >= 0) t.obj[col_minus[j]] = lp.objective[j];
  }
  t.obj_value = 0.0;
  for (int i = 0; i < m; ++i) {
    double g = t.obj[t.basis[i]];
    if (g != 0.0) {
      t.obj -= g * t.rows.row(i).head(total_cols).transpose();
      t.obj_value -= g * t.rhs(i);
    }
    t.obj[t.basis[i]] = 0.0;
  }

  LpStatus st = run_simplex(t, [&](int j) { return j < art0; });
  if (st == LpStatus::unbounded) return {LpStatus::unbounded, {}, 0.0, {}, {}};

  LpSolution sol;
  sol.status = LpStatus::optimal;

  VectorXd u = VectorXd::Zero(total_cols);
  for (int i = 0; i < m; ++i) u[t.basis[i]] = t.rhs(i);
  sol.x = VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    sol.x[j] = u[col_plus[j]] + shift[j];
    if (col_minus[j] >= 0) sol.x[j] -= u[col_minus[j]];
  }
  sol.objective_value = t.obj_value + lp.objective.dot(shift);

  // Row duals live in the reduced costs of each row's original identity
  // column: the artificial for equality rows, the slack for inequality rows
  // (whose sign flip, if any, is already baked into the slack coefficient).
  sol.eq_duals = VectorXd::Zero(me);
  sol.ub_duals = VectorXd::Zero(mu);
  for (int i = 0; i < me; ++i) sol.eq_duals[i] = row_sign[i] * t.obj[art0 + i];
  for (int i = 0; i < mu; ++i) sol.ub_duals[i] = std::max(0.0, t.obj[ns + i]);
  return sol;
}

}  // namespace screwgrasp
