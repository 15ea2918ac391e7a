#include "normpar/lp.hpp"

#include <limits>
#include <vector>

#include "normpar/error.hpp"

namespace normpar {

namespace {

// Tableau layout: rows 0..m-1 are constraints, row m is the objective row
// holding reduced costs (we minimize, so the objective row stores -c for a
// maximization). Column n_total is the right-hand side.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis, double tol) : t_(std::move(t)), basis_(std::move(basis)), tol_(tol) {}

  // Runs simplex iterations on the first `ncols` variable columns. Returns
  // false when unbounded.
  bool optimize(int ncols) {
    const int m = static_cast<int>(basis_.size());
    const int rhs = static_cast<int>(t_.cols()) - 1;
    for (int guard = 0; guard < 100000; ++guard) {
      // Bland: smallest index with negative reduced cost enters.
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        if (t_(m, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t_(i, enter) > tol_) {
          const double ratio = t_(i, rhs) / t_(i, enter);
          if (ratio < best - tol_ || (ratio <= best + tol_ && leave >= 0 && basis_[i] < basis_[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw Error("simplex iteration limit reached");
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i < t_.rows(); ++i) {
      if (i != row && t_(i, col) != 0.0) t_.row(i) -= t_(i, col) * t_.row(row);
    }
    basis_[row] = col;
  }

  Eigen::MatrixXd& data() { return t_; }
  std::vector<int>& basis() { return basis_; }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  double tol_;
};

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c, double tol) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n) throw InvalidInput("solve_lp: dimension mismatch");

  // Phase 1: artificial variables n..n+m-1, minimize their sum.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    const double s = b(i) < 0.0 ? -1.0 : 1.0;
    t.block(i, 0, 1, n) = s * A.row(i);
    t(i, n + i) = 1.0;
    t(i, n + m) = s * b(i);
    basis[i] = n + i;
  }
  for (int i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (int i = 0; i < m; ++i) t(m, n + i) = 0.0;

  Tableau tab(std::move(t), std::move(basis), tol);
  tab.optimize(n + m);
  LpResult out;
  if (-tab.data()(m, n + m) > 1e3 * tol * (1.0 + b.lpNorm<1>())) {
    out.status = LpStatus::infeasible;
    return out;
  }
  // Drive remaining artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (tab.basis()[i] >= n) {
      for (int j = 0; j < n; ++j) {
        if (std::abs(tab.data()(i, j)) > tol) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2: drop artificial columns, install the real objective.
  Eigen::MatrixXd t2(m + 1, n + 1);
  t2.block(0, 0, m + 1, n) = tab.data().block(0, 0, m + 1, n);
  t2.col(n) = tab.data().col(n + m);
  t2.row(m).setZero();
  t2.block(m, 0, 1, n) = -c.transpose();
  std::vector<int> basis2 = tab.basis();
  for (int i = 0; i < m; ++i) {
    if (basis2[i] < n) t2.row(m) -= t2(m, basis2[i]) * t2.row(i);
  }
  // Rows whose artificial is still basic are redundant: zero in every real column.
  Tableau tab2(std::move(t2), std::move(basis2), tol);
  if (!tab2.optimize(n)) {
    out.status = LpStatus::unbounded;
    return out;
  }
  out.status = LpStatus::optimal;
  out.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    const int j = tab2.basis()[i];
    if (j < n) out.x(j) = tab2.data()(i, n);
  }
  out.objective = c.dot(out.x);
  return out;
}

}  // namespace normpar
