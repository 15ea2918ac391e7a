#pragma once

// Small dense linear programs in standard equality form
//
//   maximize  c^T x   subject to  A x = b,  x >= 0
//
// solved with a two-phase tableau simplex and Bland's anti-cycling rule.
// Intended for the handful of rows that certificate cross-checks need, not
// for large sparse problems.

#include <Eigen/Dense>

namespace normpar {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;  // basic optimal solution; at most rows(A) nonzeros
  double objective = 0.0;
};

LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c, double tol = 1e-11);

}  // namespace normpar
