#include "sdmaq/lp.hpp"

#include <cmath>
#include <limits>

#include "sdmaq/error.hpp"

namespace sdmaq::lp {

namespace {

// Tableau layout: rows 0..m-1 are constraints, row m is the objective
// (reduced costs); the last column holds the right-hand side.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis, double tol)
      : t_(std::move(t)), basis_(std::move(basis)), tol_(tol) {}

  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int rhs_col() const { return static_cast<int>(t_.cols()) - 1; }

  // Runs Bland pivots over columns [0, active_cols). Returns false when the
  // objective is unbounded below.
  bool optimize(int active_cols) {
    const int m = rows();
    for (int iter = 0; iter < 100000; ++iter) {
      int enter = -1;
      for (int j = 0; j < active_cols; ++j) {
        if (t_(m, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double a = t_(i, enter);
        if (a > tol_) {
          const double ratio = t_(i, rhs_col()) / a;
          if (ratio < best - tol_ ||
              (leave >= 0 && std::abs(ratio - best) <= tol_ &&
               basis_[i] < basis_[leave])) {
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
      if (i != row && t_(i, col) != 0.0) {
        t_.row(i) -= t_(i, col) * t_.row(row);
      }
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

Solution solve(const LinearProgram& problem, double tol) {
  const int m = static_cast<int>(problem.A.rows());
  const int n = static_cast<int>(problem.A.cols());
  if (problem.b.size() != m || problem.c.size() != n) {
    throw DomainError("linear program dimensions do not match");
  }

  // Phase I: artificial variable per row, b made nonnegative.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double sign = problem.b[i] < 0.0 ? -1.0 : 1.0;
    t.block(i, 0, 1, n) = sign * problem.A.row(i);
    t(i, n + i) = 1.0;
    t(i, n + m) = sign * problem.b[i];
    basis[static_cast<std::size_t>(i)] = n + i;
  }
  for (int i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (int i = 0; i < m; ++i) t(m, n + i) = 0.0;

  Tableau tab(std::move(t), std::move(basis), tol);
  tab.optimize(n + m);

  Solution out;
  out.infeasibility = std::max(0.0, -tab.data()(m, n + m));
  if (out.infeasibility > tol) {
    out.status = Status::kInfeasible;
    return out;
  }

  // Pivot remaining (zero-valued) artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (tab.basis()[static_cast<std::size_t>(i)] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.data()(i, j)) > tol) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase II: drop artificial columns by zeroing them and restricting pivots
  // to the structural columns; redundant rows keep a basic artificial at 0.
  Eigen::MatrixXd& d = tab.data();
  for (int i = 0; i <= m; ++i) d.block(i, n, 1, m).setZero();
  d.row(m).setZero();
  d.block(m, 0, 1, n) = problem.c.transpose();
  for (int i = 0; i < m; ++i) {
    const int bcol = tab.basis()[static_cast<std::size_t>(i)];
    if (bcol < n && d(m, bcol) != 0.0) d.row(m) -= d(m, bcol) * d.row(i);
  }
  if (!tab.optimize(n)) {
    out.status = Status::kUnbounded;
    return out;
  }

  out.status = Status::kOptimal;
  out.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    const int bcol = tab.basis()[static_cast<std::size_t>(i)];
    if (bcol < n) out.x[bcol] = d(i, n + m);
  }
  out.objective = problem.c.dot(out.x);
  return out;
}

}  // namespace sdmaq::lp
