#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "tds/system.hpp"

namespace tds {

enum class VarStructure { Symmetric, General };

struct DecisionVariable {
  std::string name;
  int rows = 0;
  int cols = 0;
  VarStructure structure = VarStructure::Symmetric;
  bool psd_required = false;
  int offset = 0;  // first scalar parameter index

  int param_count() const {
    return structure == VarStructure::Symmetric ? rows * (rows + 1) / 2
                                                : rows * cols;
  }
};

enum class ConstraintSense { NegativeDefinite, PositiveSemidefinite, PositiveDefinite };

// Affine symmetric-matrix constraint: constant + sum_i params[i] * coeff[i],
// required to satisfy `sense` (strict senses are closed with the problem's
// eps_margin when handed to a solver).
struct AffineConstraint {
  std::string label;
  int size = 0;
  ConstraintSense sense = ConstraintSense::NegativeDefinite;
  Eigen::MatrixXd constant;
  std::vector<Eigen::MatrixXd> coeff;  // one per scalar parameter of the problem
};

struct LmiProblem {
  std::vector<DecisionVariable> variables;
  std::vector<AffineConstraint> constraints;
  std::string description;
  double alpha = 0.0;
  double eps_margin = 0.0;

  int total_params() const;
  const DecisionVariable& variable(const std::string& name) const;

  Eigen::MatrixXd evaluate(const AffineConstraint& c,
                           const Eigen::VectorXd& params) const;
  // Scalar parameter vector <-> named matrices, using the upper-triangle
  // row-major order for symmetric variables.
  Eigen::VectorXd pack(const std::map<std::string, Eigen::MatrixXd>& vars) const;
  std::map<std::string, Eigen::MatrixXd> unpack(const Eigen::VectorXd& params) const;
};

int variable_count(const LmiProblem& problem);

Eigen::MatrixXd kron(const Eigen::MatrixXd& left, const Eigen::MatrixXd& right);

// e_i = [0 ... I_n ... 0], block index i in 1..m (one-based, as printed).
Eigen::MatrixXd selector(int i, int blocks, int n);

LmiProblem build_theorem41(const SystemModel& system, double alpha);
LmiProblem build_theorem42(const SystemModel& system, double alpha);
LmiProblem build_corollary41(const SystemModel& system);

}  // namespace tds
