#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tds/lmi.hpp"

namespace tds {

// Sparse SDPA ".dat-s" representation:
//   X = sum_i y_i F_i - F_0 >= 0 per block, objective c (all zero here).
struct SdpaProblem {
  int num_vars = 0;
  std::vector<int> block_sizes;
  std::vector<double> objective;
  // mats[i] holds the dense blocks of F_i, i = 0..num_vars.
  std::vector<std::vector<Eigen::MatrixXd>> mats;
};

// Encodes the feasibility problem (constraints closed with eps_margin) with a
// dummy zero objective.
std::string export_sdpa(const LmiProblem& problem);

SdpaProblem parse_sdpa(const std::string& text);

// The same problem in the exporter's internal form, for structural diffing
// against a re-parse.
SdpaProblem sdpa_view(const LmiProblem& problem);

bool sdpa_equal(const SdpaProblem& a, const SdpaProblem& b, double tol = 0.0);

}  // namespace tds
