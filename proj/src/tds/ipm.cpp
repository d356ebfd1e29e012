#include "tds/ipm.hpp"

#include <cmath>
#include <limits>

namespace tds {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double frob_dot(const MatrixXd& a, const MatrixXd& b) {
  return (a.array() * b.array()).sum();
}

// Largest step alpha in [0, 1] keeping M + alpha*dM positive definite.
double max_step(const MatrixXd& M, const MatrixXd& dM, double fraction) {
  Eigen::LLT<MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) return 0.0;
  MatrixXd L = llt.matrixL();
  MatrixXd W = L.triangularView<Eigen::Lower>().solve(dM);
  W = L.triangularView<Eigen::Lower>().solve(W.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es((W + W.transpose()) / 2.0,
                                             Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= 0.0) return 1.0;
  return std::min(1.0, -fraction / lmin);
}

bool is_pd(const MatrixXd& M) {
  return Eigen::LLT<MatrixXd>(M).info() == Eigen::Success;
}

}  // namespace

IpmResult solve_block_lmi(const BlockLmiProgram& prog, const IpmOptions& opts) {
  const int m = prog.num_vars;
  const int p = static_cast<int>(prog.blocks.size());
  IpmResult res;
  res.y = VectorXd::Zero(m);
  if (m == 0 || p == 0) {
    res.converged = true;
    for (const auto& blk : prog.blocks)
      if (!is_pd(blk.C)) res.converged = false;  // constant infeasibility
    return res;
  }

  int total_dim = 0;
  double cscale = 1.0;
  for (const auto& blk : prog.blocks) {
    total_dim += blk.dim;
    cscale = std::max(cscale, blk.C.cwiseAbs().maxCoeff());
  }
  const double bscale = 1.0 + prog.b.cwiseAbs().maxCoeff();

  auto slack_at = [&](const VectorXd& y, int j) {
    MatrixXd S = prog.blocks[j].C;
    for (const auto& [i, A] : prog.blocks[j].coeffs) S += y[i] * A;
    return S;
  };

  // Initial point.
  VectorXd y = VectorXd::Zero(m);
  std::vector<MatrixXd> X(p), Z(p);
  bool warm = false;
  if (opts.y0.size() == m) {
    bool ok = true;
    for (int j = 0; j < p && ok; ++j) {
      MatrixXd S = slack_at(opts.y0, j);
      ok = is_pd(S);
      Z[j] = std::move(S);
    }
    if (ok) {
      y = opts.y0;
      warm = true;
    }
  }
  if (!warm)
    for (int j = 0; j < p; ++j)
      Z[j] = (1.0 + cscale) * MatrixXd::Identity(prog.blocks[j].dim, prog.blocks[j].dim);
  for (int j = 0; j < p; ++j)
    X[j] = (1.0 + cscale) *
           MatrixXd::Identity(prog.blocks[j].dim, prog.blocks[j].dim);

  std::vector<MatrixXd> Rd(p), Zi(p), dXa(p), dZa(p), dX(p), dZ(p);
  MatrixXd H(m, m);
  VectorXd rp(m), rhs(m);

  double best_mu = std::numeric_limits<double>::infinity();
  int stall = 0;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    res.iterations = iter;

    // Residuals.
    rp = -prog.b;
    for (int j = 0; j < p; ++j) {
      for (const auto& [i, A] : prog.blocks[j].coeffs) rp[i] -= frob_dot(A, X[j]);
      Rd[j] = slack_at(y, j) - Z[j];
    }
    double mu = 0.0;
    for (int j = 0; j < p; ++j) mu += frob_dot(X[j], Z[j]);
    mu /= total_dim;

    double primal_obj = 0.0;
    for (int j = 0; j < p; ++j) primal_obj += frob_dot(prog.blocks[j].C, X[j]);
    const double dual_obj = prog.b.dot(y);
    const double gap = mu * total_dim;
    res.objective = dual_obj;
    res.duality_gap = gap / (1.0 + std::abs(primal_obj) + std::abs(dual_obj));
    res.primal_residual = rp.cwiseAbs().maxCoeff() / bscale;
    double dinf = 0.0;
    for (int j = 0; j < p; ++j)
      dinf = std::max(dinf, Rd[j].cwiseAbs().maxCoeff());
    res.dual_residual = dinf / (1.0 + cscale);
    res.y = y;

    if (res.duality_gap < opts.tol_gap &&
        res.primal_residual < opts.tol_feasibility &&
        res.dual_residual < opts.tol_feasibility) {
      res.converged = true;
      return res;
    }
    if (mu < best_mu * 0.999) {
      best_mu = mu;
      stall = 0;
    } else if (++stall > 20) {
      return res;  // no progress
    }

    // Z inverses and Schur complement H_ik = sum_j <A_ji, Zi A_jk X>.
    H.setZero();
    std::vector<std::vector<MatrixXd>> T(p);
    for (int j = 0; j < p; ++j) {
      Eigen::LLT<MatrixXd> llt(Z[j]);
      if (llt.info() != Eigen::Success) return res;
      Zi[j] = llt.solve(MatrixXd::Identity(prog.blocks[j].dim, prog.blocks[j].dim));
      const auto& coeffs = prog.blocks[j].coeffs;
      T[j].resize(coeffs.size());
      for (size_t k = 0; k < coeffs.size(); ++k)
        T[j][k] = Zi[j] * coeffs[k].second * X[j];
      for (size_t a = 0; a < coeffs.size(); ++a)
        for (size_t k = 0; k < coeffs.size(); ++k)
          H(coeffs[a].first, coeffs[k].first) += frob_dot(coeffs[a].second, T[j][k]);
    }
    Eigen::PartialPivLU<MatrixXd> lu(H);

    auto solve_direction = [&](double sigma_mu, const std::vector<MatrixXd>* W,
                               std::vector<MatrixXd>& dXo, std::vector<MatrixXd>& dZo,
                               VectorXd& dyo) {
      rhs = prog.b;
      for (int j = 0; j < p; ++j) {
        MatrixXd base = -Zi[j] * Rd[j] * X[j];
        if (sigma_mu != 0.0) base += sigma_mu * Zi[j];
        if (W) base -= Zi[j] * (*W)[j];
        for (const auto& [i, A] : prog.blocks[j].coeffs)
          rhs[i] += frob_dot(A, base);
      }
      dyo = lu.solve(rhs);
      if (!dyo.allFinite()) return false;
      for (int j = 0; j < p; ++j) {
        dZo[j] = Rd[j];
        for (const auto& [i, A] : prog.blocks[j].coeffs) dZo[j] += dyo[i] * A;
        MatrixXd d = -X[j] - Zi[j] * dZo[j] * X[j];
        if (sigma_mu != 0.0) d += sigma_mu * Zi[j];
        if (W) d -= Zi[j] * (*W)[j];
        dXo[j] = (d + d.transpose()) / 2.0;
      }
      return true;
    };

    VectorXd dy_a(m), dy(m);
    if (!solve_direction(0.0, nullptr, dXa, dZa, dy_a)) return res;

    double ap = 1.0, ad = 1.0;
    for (int j = 0; j < p; ++j) {
      ap = std::min(ap, max_step(X[j], dXa[j], opts.step_fraction));
      ad = std::min(ad, max_step(Z[j], dZa[j], opts.step_fraction));
    }
    double mu_aff = 0.0;
    for (int j = 0; j < p; ++j)
      mu_aff += frob_dot(X[j] + ap * dXa[j], Z[j] + ad * dZa[j]);
    mu_aff /= total_dim;
    double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
    sigma = std::min(1.0, sigma);

    std::vector<MatrixXd> W(p);
    for (int j = 0; j < p; ++j) W[j] = dZa[j] * dXa[j];
    if (!solve_direction(sigma * mu, &W, dX, dZ, dy)) return res;

    ap = 1.0;
    ad = 1.0;
    for (int j = 0; j < p; ++j) {
      ap = std::min(ap, max_step(X[j], dX[j], opts.step_fraction));
      ad = std::min(ad, max_step(Z[j], dZ[j], opts.step_fraction));
    }
    // Guard against rounding at the cone boundary.
    for (int t = 0; t < 10; ++t) {
      bool ok = true;
      for (int j = 0; j < p && ok; ++j) ok = is_pd(X[j] + ap * dX[j]);
      if (ok) break;
      ap *= 0.8;
    }
    for (int t = 0; t < 10; ++t) {
      bool ok = true;
      for (int j = 0; j < p && ok; ++j) ok = is_pd(Z[j] + ad * dZ[j]);
      if (ok) break;
      ad *= 0.8;
    }

    for (int j = 0; j < p; ++j) {
      X[j] += ap * dX[j];
      Z[j] += ad * dZ[j];
    }
    y += ad * dy;
  }
  return res;
}

}  // namespace tds
