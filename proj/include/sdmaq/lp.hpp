#pragma once

#include <vector>

#include <Eigen/Core>

namespace sdmaq::lp {

/// minimize c·x  subject to  A x = b,  x >= 0.
struct LinearProgram {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Solution {
  Status status = Status::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  // Sum of artificial variables left after phase I (L1 constraint violation).
  double infeasibility = 0.0;
};

/// Dense two-phase tableau simplex with Bland's anti-cycling rule. Problems
/// here have at most a few hundred columns, so no sparsity is exploited.
/// `tol` is the pivot and feasibility tolerance.
Solution solve(const LinearProgram& problem, double tol = 1e-9);

}  // namespace sdmaq::lp
