#include "tds/lmi.hpp"

#include <cmath>
#include <stdexcept>

#include "tds/wii.hpp"

namespace tds {

int LmiProblem::total_params() const {
  int total = 0;
  for (const auto& v : variables) total += v.param_count();
  return total;
}

const DecisionVariable& LmiProblem::variable(const std::string& name) const {
  for (const auto& v : variables)
    if (v.name == name) return v;
  throw std::domain_error("LmiProblem: unknown variable " + name);
}

Eigen::MatrixXd LmiProblem::evaluate(const AffineConstraint& c,
                                     const Eigen::VectorXd& params) const {
  if (params.size() != total_params())
    throw std::domain_error("LmiProblem::evaluate: parameter vector size mismatch");
  Eigen::MatrixXd M = c.constant;
  for (int i = 0; i < params.size(); ++i)
    if (params[i] != 0.0) M += params[i] * c.coeff[i];
  return M;
}

Eigen::VectorXd LmiProblem::pack(
    const std::map<std::string, Eigen::MatrixXd>& vars) const {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(total_params());
  for (const auto& v : variables) {
    auto it = vars.find(v.name);
    if (it == vars.end())
      throw std::domain_error("LmiProblem::pack: missing variable " + v.name);
    const Eigen::MatrixXd& M = it->second;
    if (M.rows() != v.rows || M.cols() != v.cols)
      throw std::domain_error("LmiProblem::pack: shape mismatch for " + v.name);
    int k = v.offset;
    if (v.structure == VarStructure::Symmetric) {
      for (int r = 0; r < v.rows; ++r)
        for (int c = r; c < v.cols; ++c) p[k++] = M(r, c);
    } else {
      for (int r = 0; r < v.rows; ++r)
        for (int c = 0; c < v.cols; ++c) p[k++] = M(r, c);
    }
  }
  return p;
}

std::map<std::string, Eigen::MatrixXd> LmiProblem::unpack(
    const Eigen::VectorXd& params) const {
  std::map<std::string, Eigen::MatrixXd> out;
  for (const auto& v : variables) {
    Eigen::MatrixXd M(v.rows, v.cols);
    int k = v.offset;
    if (v.structure == VarStructure::Symmetric) {
      for (int r = 0; r < v.rows; ++r)
        for (int c = r; c < v.cols; ++c) {
          M(r, c) = params[k];
          M(c, r) = params[k];
          ++k;
        }
    } else {
      for (int r = 0; r < v.rows; ++r)
        for (int c = 0; c < v.cols; ++c) M(r, c) = params[k++];
    }
    out[v.name] = std::move(M);
  }
  return out;
}

int variable_count(const LmiProblem& problem) { return problem.total_params(); }

Eigen::MatrixXd kron(const Eigen::MatrixXd& left, const Eigen::MatrixXd& right) {
  Eigen::MatrixXd out(left.rows() * right.rows(), left.cols() * right.cols());
  for (int i = 0; i < left.rows(); ++i)
    for (int j = 0; j < left.cols(); ++j)
      out.block(i * right.rows(), j * right.cols(), right.rows(), right.cols()) =
          left(i, j) * right;
  return out;
}

Eigen::MatrixXd selector(int i, int blocks, int n) {
  if (i < 1 || i > blocks) throw std::domain_error("selector: block index out of range");
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, blocks * n);
  e.block(0, (i - 1) * n, n, n) = Eigen::MatrixXd::Identity(n, n);
  return e;
}

namespace {

class ProblemBuilder {
 public:
  void add_variable(const std::string& name, int rows, int cols,
                    VarStructure structure, bool psd_required) {
    DecisionVariable v;
    v.name = name;
    v.rows = rows;
    v.cols = cols;
    v.structure = structure;
    v.psd_required = psd_required;
    v.offset = problem_.total_params();
    problem_.variables.push_back(v);
  }

  LmiProblem& problem() { return problem_; }

  // Adds the strict positivity constraint for every psd_required variable.
  void add_definiteness_constraints() {
    for (const auto& v : problem_.variables) {
      if (!v.psd_required) continue;
      AffineConstraint c;
      c.label = v.name + " > 0";
      c.size = v.rows;
      c.sense = ConstraintSense::PositiveDefinite;
      c.constant = Eigen::MatrixXd::Zero(v.rows, v.rows);
      c.coeff.assign(problem_.total_params(),
                     Eigen::MatrixXd::Zero(v.rows, v.rows));
      int k = v.offset;
      for (int r = 0; r < v.rows; ++r)
        for (int cc = r; cc < v.cols; ++cc) {
          c.coeff[k](r, cc) = 1.0;
          c.coeff[k](cc, r) = 1.0;
          ++k;
        }
      problem_.constraints.push_back(std::move(c));
    }
  }

 private:
  LmiProblem problem_;
};

// Accumulates one affine constraint from terms of the form c * F' V G.
class ConstraintBuilder {
 public:
  ConstraintBuilder(const LmiProblem& p, int size) : problem_(p), size_(size) {
    constant_ = Eigen::MatrixXd::Zero(size, size);
    coeff_.assign(p.total_params(), Eigen::MatrixXd::Zero(size, size));
  }

  // c * (F' V G + G' V' F) for symmetric variable V.
  void add_pair(const DecisionVariable& v, const Eigen::MatrixXd& F,
                const Eigen::MatrixXd& G, double c) {
    check(v, F, G);
    int k = v.offset;
    for (int p = 0; p < v.rows; ++p)
      for (int q = p; q < v.rows; ++q) {
        Eigen::MatrixXd upd = F.row(p).transpose() * G.row(q);
        if (p != q) upd += F.row(q).transpose() * G.row(p);
        coeff_[k] += c * (upd + upd.transpose());
        ++k;
      }
  }

  // c * F' V F for symmetric variable V.
  void add_quad(const DecisionVariable& v, const Eigen::MatrixXd& F, double c) {
    add_pair(v, F, F, c / 2.0);
  }

  // c * (F' X G + G' X' F) for a general (unstructured) variable X.
  void add_pair_general(const DecisionVariable& v, const Eigen::MatrixXd& F,
                        const Eigen::MatrixXd& G, double c) {
    if (F.rows() != v.rows || G.rows() != v.cols)
      throw std::domain_error("add_pair_general: selector shape mismatch");
    int k = v.offset;
    for (int p = 0; p < v.rows; ++p)
      for (int q = 0; q < v.cols; ++q) {
        Eigen::MatrixXd upd = F.row(p).transpose() * G.row(q);
        coeff_[k] += c * (upd + upd.transpose());
        ++k;
      }
  }

  AffineConstraint finish(ConstraintSense sense, std::string label) {
    AffineConstraint c;
    c.label = std::move(label);
    c.size = size_;
    c.sense = sense;
    // Terms are assembled symmetrically; assert and canonicalize anyway.
    auto symmetrize = [](Eigen::MatrixXd& M) {
      const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
      if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale)
        throw std::logic_error("ConstraintBuilder: assembled matrix not symmetric");
      M = ((M + M.transpose()) / 2.0).eval();
    };
    symmetrize(constant_);
    for (auto& M : coeff_) symmetrize(M);
    c.constant = std::move(constant_);
    c.coeff = std::move(coeff_);
    return c;
  }

 private:
  void check(const DecisionVariable& v, const Eigen::MatrixXd& F,
             const Eigen::MatrixXd& G) const {
    if (v.structure != VarStructure::Symmetric)
      throw std::domain_error("add_pair: variable must be symmetric");
    if (F.rows() != v.rows || G.rows() != v.rows || F.cols() != size_ ||
        G.cols() != size_)
      throw std::domain_error("add_pair: selector shape mismatch");
  }

  const LmiProblem& problem_;
  int size_;
  Eigen::MatrixXd constant_;
  std::vector<Eigen::MatrixXd> coeff_;
};

Eigen::MatrixXd vstack(const std::vector<Eigen::MatrixXd>& parts) {
  Eigen::Index rows = 0;
  for (const auto& p : parts) rows += p.rows();
  Eigen::MatrixXd out(rows, parts.front().cols());
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.middleRows(at, p.rows()) = p;
    at += p.rows();
  }
  return out;
}

double strictness_margin(const SystemModel& sys) {
  return 1e-6 * (1.0 + sys.matrix_scale());
}

}  // namespace

LmiProblem build_theorem41(const SystemModel& system, double alpha) {
  if (system.kind != SystemModel::Kind::ConstantDelay)
    throw std::domain_error("build_theorem41: constant-delay system required");
  system.validate();
  if (!(alpha > 0.0)) throw std::domain_error("build_theorem41: alpha must be positive");

  const int n = system.n;
  const double h = system.h;

  ProblemBuilder pb;
  pb.add_variable("P", 3 * n, 3 * n, VarStructure::Symmetric, true);
  pb.add_variable("Q", n, n, VarStructure::Symmetric, true);
  pb.add_variable("R", n, n, VarStructure::Symmetric, true);
  pb.add_variable("Z", n, n, VarStructure::Symmetric, true);
  LmiProblem& prob = pb.problem();
  prob.description = "theorem41";
  prob.alpha = alpha;
  prob.eps_margin = strictness_margin(system);

  const auto& P = prob.variable("P");
  const auto& Q = prob.variable("Q");
  const auto& R = prob.variable("R");
  const auto& Z = prob.variable("Z");

  const Eigen::MatrixXd e1 = selector(1, 4, n), e2 = selector(2, 4, n),
                        e3 = selector(3, 4, n), e4 = selector(4, 4, n);
  const Eigen::MatrixXd Acal = system.A0 * e1 + system.A1 * e2 + system.A2 * e3;
  const Eigen::MatrixXd F0 = vstack({e1, e3, e4});
  const Eigen::MatrixXd F1 = vstack({Acal, e1 - e2, h * e1 - e3});

  const WiiCoefficients c = build_coefficients(alpha, h);

  ConstraintBuilder cb(prob, 4 * n);
  // Pi0
  cb.add_pair(P, F0, F1, 1.0);
  cb.add_quad(P, F0, alpha);
  // Pi1
  cb.add_quad(Q, e1, 1.0);
  cb.add_quad(Q, e2, -std::exp(-alpha * h));
  cb.add_quad(R, Acal, h);
  cb.add_quad(Z, Acal, h * h / 2.0);
  // -Pi2, with (L1 (x) I_n) F2 folded into a single row map
  const Eigen::MatrixXd w1 = e1 - e2;
  const Eigen::MatrixXd w2 = h * e1 - e3;
  cb.add_quad(R, w1, -c.r_single_jensen);
  cb.add_quad(R, w1 + c.l1(1) * w2, -c.r_single_refine);
  // -Pi3
  const Eigen::MatrixXd w3 = h * h / 2.0 * e1 - e4;
  cb.add_quad(Z, w2, -c.r_double_jensen);
  cb.add_quad(Z, w2 + c.l2(1) * w3, -c.r_double_refine);

  prob.constraints.push_back(
      cb.finish(ConstraintSense::NegativeDefinite, "Pi0+Pi1-Pi2-Pi3 < 0"));
  pb.add_definiteness_constraints();
  return prob;
}

namespace {

// Shared assembly for Theorem 4.2 (with_alpha = true) and Corollary 4.1
// (with_alpha = false, alpha ignored).  When h1 == 0 the averaged-history
// block e5 is removed from the basis and every R1 term (all carry an h1
// factor in the functional) is dropped, shrinking the state to 6n.
LmiProblem build_interval(const SystemModel& system, double alpha, bool with_alpha) {
  if (system.kind != SystemModel::Kind::IntervalDelay)
    throw std::domain_error("interval-delay system required");
  system.validate();
  if (system.h1 == system.h2)
    throw std::domain_error("h1 == h2: use the constant-delay theorem");
  if (with_alpha && !(alpha > 0.0))
    throw std::domain_error("alpha must be positive");

  const int n = system.n;
  const double h1 = system.h1, h2 = system.h2, h12 = h2 - h1;
  const bool degenerate = (h1 == 0.0);
  const int blocks = degenerate ? 6 : 7;
  const double a = with_alpha ? alpha : 0.0;

  ProblemBuilder pb;
  pb.add_variable("P", 3 * n, 3 * n, VarStructure::Symmetric, true);
  pb.add_variable("Q1", n, n, VarStructure::Symmetric, true);
  pb.add_variable("Q2", n, n, VarStructure::Symmetric, true);
  pb.add_variable("R1", n, n, VarStructure::Symmetric, true);
  pb.add_variable("R2", n, n, VarStructure::Symmetric, true);
  pb.add_variable("X", 2 * n, 2 * n, VarStructure::General, false);
  LmiProblem& prob = pb.problem();
  prob.description = with_alpha ? "theorem42" : "corollary41";
  prob.alpha = a;
  prob.eps_margin = strictness_margin(system);

  const auto& P = prob.variable("P");
  const auto& Q1 = prob.variable("Q1");
  const auto& Q2 = prob.variable("Q2");
  const auto& R1 = prob.variable("R1");
  const auto& R2 = prob.variable("R2");
  const auto& X = prob.variable("X");

  // Paper block index -> selector in the (possibly reduced) basis.
  auto e = [&](int i) {
    if (degenerate) {
      if (i == 5) throw std::logic_error("e5 unavailable when h1 == 0");
      return selector(i < 5 ? i : i - 1, blocks, n);
    }
    return selector(i, blocks, n);
  };
  const Eigen::MatrixXd zero_row = Eigen::MatrixXd::Zero(n, blocks * n);
  const Eigen::MatrixXd Acal = system.A * e(1) + system.Ad * e(3);
  const Eigen::MatrixXd Ups0 = vstack({Acal, e(1) - e(2), e(2) - e(4)});
  const Eigen::MatrixXd Ups2 = vstack({e(2) - e(3), e(2) + e(3) - 2.0 * e(6)});
  const Eigen::MatrixXd Ups3 = vstack({e(3) - e(4), e(3) + e(4) - 2.0 * e(7)});
  auto Ups = [&](double h) {
    return vstack({e(1), degenerate ? zero_row : (h1 * e(5)).eval(),
                   (h - h1) * e(6) + (h2 - h) * e(7)});
  };

  // Reciprocally convex coupling block, Pi >= 0.
  {
    ConstraintBuilder cb(prob, 4 * n);
    const Eigen::MatrixXd s1 = selector(1, 4, n), s2 = selector(2, 4, n),
                          s3 = selector(3, 4, n), s4 = selector(4, 4, n);
    cb.add_quad(R2, s1, 1.0);
    cb.add_quad(R2, s2, 3.0);
    cb.add_quad(R2, s3, 1.0);
    cb.add_quad(R2, s4, 3.0);
    cb.add_pair_general(X, vstack({s1, s2}), vstack({s3, s4}), 1.0);
    prob.constraints.push_back(
        cb.finish(ConstraintSense::PositiveSemidefinite, "Pi >= 0"));
  }

  const double coupling_weight = with_alpha ? std::exp(-a * h12) : 1.0;
  for (double h : {h1, h2}) {
    ConstraintBuilder cb(prob, blocks * n);
    const Eigen::MatrixXd U = Ups(h);
    // Omega0 (Theorem 4.2) or Omega0-tilde (Corollary 4.1)
    cb.add_pair(P, U, Ups0, 1.0);
    if (with_alpha) cb.add_quad(P, U, a);
    // Omega1 / Phi1 Q terms
    const double w_h1 = with_alpha ? std::exp(-a * h1) : 1.0;
    const double w_h2 = with_alpha ? std::exp(-a * h2) : 1.0;
    cb.add_quad(Q1, e(1), 1.0);
    cb.add_quad(Q1, e(2), -w_h1);
    cb.add_quad(Q2, e(2), w_h1);
    cb.add_quad(Q2, e(4), -w_h2);
    // Omega2 / Phi1 R terms
    if (!degenerate) cb.add_quad(R1, Acal, h1 * h1);
    cb.add_quad(R2, Acal, h12 * h12 * (with_alpha ? std::exp(a * h1) : 1.0));
    // -Omega3 / -Phi2: refinement over [t-h1, t]
    if (!degenerate) {
      const Eigen::MatrixXd d1 = e(1) - e(2);
      const Eigen::MatrixXd d2 = h1 * (e(1) - e(5));
      if (with_alpha) {
        const WiiCoefficients ct = build_coefficients(a, h1);
        cb.add_quad(R1, d1, -h1 * ct.r_single_jensen);
        cb.add_quad(R1, d1 + ct.l1(1) * d2, -h1 * ct.r_single_refine);
      } else {
        cb.add_quad(R1, d1, -1.0);
        cb.add_quad(R1, e(1) + e(2) - 2.0 * e(5), -3.0);
      }
    }
    // -e^{-alpha h12} Delta' Pi Delta
    cb.add_quad(R2, Ups2.topRows(n), -coupling_weight);
    cb.add_quad(R2, Ups2.bottomRows(n), -3.0 * coupling_weight);
    cb.add_quad(R2, Ups3.topRows(n), -coupling_weight);
    cb.add_quad(R2, Ups3.bottomRows(n), -3.0 * coupling_weight);
    cb.add_pair_general(X, Ups2, Ups3, -coupling_weight);

    prob.constraints.push_back(cb.finish(
        ConstraintSense::NegativeDefinite,
        (h == h1 ? "Omega(h1) < 0" : "Omega(h2) < 0")));
  }
  pb.add_definiteness_constraints();
  return prob;
}

}  // namespace

LmiProblem build_theorem42(const SystemModel& system, double alpha) {
  return build_interval(system, alpha, true);
}

LmiProblem build_corollary41(const SystemModel& system) {
  return build_interval(system, 0.0, false);
}

}  // namespace tds
