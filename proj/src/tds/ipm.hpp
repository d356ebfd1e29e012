#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace tds {

// Block-diagonal linear matrix inequality program in dual form:
//
//   maximize  b . y   subject to   S_j(y) = C_j + sum_i y_i A_{ji}  PSD
//
// solved with an infeasible-start primal-dual predictor-corrector method
// (HKM search direction, Mehrotra centering).
struct BlockLmiProgram {
  struct Block {
    int dim = 0;
    Eigen::MatrixXd C;
    // Sparse over variables: (variable index, symmetric coefficient matrix).
    std::vector<std::pair<int, Eigen::MatrixXd>> coeffs;
  };
  int num_vars = 0;
  Eigen::VectorXd b;
  std::vector<Block> blocks;
};

struct IpmOptions {
  int max_iterations = 200;
  double tol_gap = 1e-8;
  double tol_feasibility = 1e-8;
  double step_fraction = 0.98;
  // Optional strictly feasible dual start (C_j + sum y0_i A_ji must be PD).
  Eigen::VectorXd y0;
};

struct IpmResult {
  bool converged = false;
  Eigen::VectorXd y;
  double objective = 0.0;
  double duality_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

IpmResult solve_block_lmi(const BlockLmiProgram& prog, const IpmOptions& opts);

}  // namespace tds
