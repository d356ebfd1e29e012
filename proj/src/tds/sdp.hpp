#pragma once

#include <map>
#include <string>

#include "tds/lmi.hpp"

namespace tds {

enum class Verdict { Feasible, Infeasible, Inconclusive };

struct SolverStats {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double duality_gap = 0.0;
  double wall_seconds = 0.0;
};

struct FeasibilityResult {
  Verdict verdict = Verdict::Inconclusive;
  // Optimal value of the auxiliary margin variable t in
  // "maximize t s.t. every (closed) constraint >= t*I"; positive means the
  // strictness-shifted system is strictly satisfiable.
  double margin = 0.0;
  // Smallest signed eigenvalue slack of the re-checked constraints at the
  // certificate (only meaningful when a certificate is present).
  double verified_slack = 0.0;
  std::map<std::string, Eigen::MatrixXd> certificate;
  SolverStats stats;
};

struct SdpSettings {
  double residual_tol = 1e-8;
  double verification_slack_rel = 1e-7;
  int max_iterations = 200;
  // Box bound on decision parameters; the feasibility problems are
  // homogeneous so this only normalizes the certificate scale.
  double variable_bound = 1e8;
};

FeasibilityResult check_feasible(const LmiProblem& problem,
                                 const SdpSettings& settings = {});

// Solver-independent re-check: minimum signed eigenvalue slack over all
// constraints at the given certificate, measured against the closed
// (eps_margin shifted) senses.  Throws if a variable is missing.
double verify_certificate(const LmiProblem& problem,
                          const std::map<std::string, Eigen::MatrixXd>& certificate);

}  // namespace tds
