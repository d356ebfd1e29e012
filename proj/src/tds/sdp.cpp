#include "tds/sdp.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "tds/ipm.hpp"

namespace tds {

namespace {

// Constraint in closed form "constant + sum params*coeff >= 0" after folding
// the strictness shift of ND/PD senses.
Eigen::MatrixXd closed_constant(const AffineConstraint& c, double eps) {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(c.size, c.size);
  switch (c.sense) {
    case ConstraintSense::NegativeDefinite:
      return -c.constant - eps * I;
    case ConstraintSense::PositiveDefinite:
      return c.constant - eps * I;
    case ConstraintSense::PositiveSemidefinite:
      return c.constant;
  }
  return c.constant;
}

double coeff_sign(ConstraintSense s) {
  return s == ConstraintSense::NegativeDefinite ? -1.0 : 1.0;
}

BlockLmiProgram to_program(const LmiProblem& problem, const SdpSettings& settings) {
  const int m = problem.total_params();
  BlockLmiProgram prog;
  prog.num_vars = m + 1;  // trailing variable is the margin t
  prog.b = Eigen::VectorXd::Zero(m + 1);
  prog.b[m] = 1.0;

  for (const auto& c : problem.constraints) {
    BlockLmiProgram::Block blk;
    blk.dim = c.size;
    blk.C = closed_constant(c, problem.eps_margin);
    const double s = coeff_sign(c.sense);
    for (int i = 0; i < m; ++i)
      if (c.coeff[i].cwiseAbs().maxCoeff() != 0.0)
        blk.coeffs.emplace_back(i, s * c.coeff[i]);
    blk.coeffs.emplace_back(m, -Eigen::MatrixXd::Identity(c.size, c.size));
    prog.blocks.push_back(std::move(blk));
  }
  // Cap the margin at 1; the constraints are homogeneous in the model
  // parameters, so any strictly feasible point scales to t = 1 and the
  // optimum stays well-conditioned.
  {
    BlockLmiProgram::Block blk;
    blk.dim = 1;
    blk.C = Eigen::MatrixXd::Constant(1, 1, 1.0);
    blk.coeffs.emplace_back(m, Eigen::MatrixXd::Constant(1, 1, -1.0));
    prog.blocks.push_back(std::move(blk));
  }
  // Box normalization |y_i| <= B on the model parameters.
  const double B = settings.variable_bound;
  for (int i = 0; i < m; ++i) {
    for (double sgn : {1.0, -1.0}) {
      BlockLmiProgram::Block blk;
      blk.dim = 1;
      blk.C = Eigen::MatrixXd::Constant(1, 1, B);
      blk.coeffs.emplace_back(i, Eigen::MatrixXd::Constant(1, 1, sgn));
      prog.blocks.push_back(std::move(blk));
    }
  }
  return prog;
}

}  // namespace

double verify_certificate(const LmiProblem& problem,
                          const std::map<std::string, Eigen::MatrixXd>& certificate) {
  const Eigen::VectorXd params = problem.pack(certificate);
  double slack = std::numeric_limits<double>::infinity();
  for (const auto& c : problem.constraints) {
    Eigen::MatrixXd M = problem.evaluate(c, params);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    double s = 0.0;
    switch (c.sense) {
      case ConstraintSense::NegativeDefinite:
        s = -es.eigenvalues().maxCoeff() - problem.eps_margin;
        break;
      case ConstraintSense::PositiveDefinite:
        s = es.eigenvalues().minCoeff() - problem.eps_margin;
        break;
      case ConstraintSense::PositiveSemidefinite:
        s = es.eigenvalues().minCoeff();
        break;
    }
    slack = std::min(slack, s);
  }
  return slack;
}

FeasibilityResult check_feasible(const LmiProblem& problem,
                                 const SdpSettings& settings) {
  FeasibilityResult out;
  const auto t0 = std::chrono::steady_clock::now();

  if (problem.constraints.empty()) {
    out.verdict = Verdict::Feasible;
    out.margin = std::numeric_limits<double>::infinity();
    out.verified_slack = std::numeric_limits<double>::infinity();
    return out;
  }

  BlockLmiProgram prog = to_program(problem, settings);
  const int m = problem.total_params();

  // Strictly feasible dual start: zero parameters, t far below every
  // constant block's smallest eigenvalue.
  double tmin = -1.0;
  for (const auto& blk : prog.blocks) {
    if (blk.dim == 1) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blk.C, Eigen::EigenvaluesOnly);
    tmin = std::min(tmin, es.eigenvalues().minCoeff() - 1.0);
  }

  // Equilibrate: the assembled coefficient matrices mix entries of order
  // eps_margin with entries of order h^2 * |A|^2, which stalls the interior
  // point method on the larger problems.  Rescale each parameter by the
  // square root of its worst coefficient norm and then each block to unit
  // coefficient norm; the margin variable t keeps scale 1 so its sign (the
  // feasibility verdict) is untouched.  Certificates are unscaled afterwards.
  Eigen::VectorXd d = Eigen::VectorXd::Ones(m + 1);
  for (const auto& blk : prog.blocks)
    for (const auto& [i, A] : blk.coeffs)
      if (i < m) d[i] = std::max(d[i], A.cwiseAbs().maxCoeff());
  for (int i = 0; i < m; ++i) d[i] = 1.0 / std::sqrt(d[i]);
  for (auto& blk : prog.blocks) {
    double norm = std::max(1.0, blk.C.cwiseAbs().maxCoeff());
    for (auto& [i, A] : blk.coeffs) {
      A *= d[i];
      norm = std::max(norm, A.cwiseAbs().maxCoeff());
    }
    const double s = 1.0 / norm;
    blk.C *= s;
    for (auto& [i, A] : blk.coeffs) A *= s;
  }

  IpmOptions opts;
  opts.max_iterations = settings.max_iterations;
  opts.tol_gap = settings.residual_tol;
  opts.tol_feasibility = settings.residual_tol;
  opts.y0 = Eigen::VectorXd::Zero(m + 1);
  opts.y0[m] = tmin;

  IpmResult r = solve_block_lmi(prog, opts);
  if (r.y.size() == m + 1) r.y.array() *= d.array();

  out.stats.iterations = r.iterations;
  out.stats.primal_residual = r.primal_residual;
  out.stats.dual_residual = r.dual_residual;
  out.stats.duality_gap = r.duality_gap;
  out.margin = r.y.size() > m ? r.y[m] : 0.0;

  if (!r.converged) {
    out.verdict = Verdict::Inconclusive;
  } else if (out.margin >= 0.0) {
    // Re-check independently before claiming feasibility.
    out.certificate = problem.unpack(r.y.head(m));
    out.verified_slack = verify_certificate(problem, out.certificate);
    double scale = 1.0;
    const Eigen::VectorXd params = r.y.head(m);
    for (const auto& c : problem.constraints)
      scale = std::max(scale, problem.evaluate(c, params).cwiseAbs().maxCoeff());
    if (out.verified_slack >= -settings.verification_slack_rel * scale) {
      out.verdict = Verdict::Feasible;
    } else {
      out.verdict = Verdict::Inconclusive;
      out.certificate.clear();
    }
  } else {
    out.verdict = Verdict::Infeasible;
  }

  out.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace tds
