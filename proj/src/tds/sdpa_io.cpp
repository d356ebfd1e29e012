#include "tds/sdpa_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace tds {

namespace {

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

}  // namespace

SdpaProblem sdpa_view(const LmiProblem& problem) {
  const int m = problem.total_params();
  SdpaProblem s;
  s.num_vars = m;
  s.objective.assign(m, 0.0);
  s.mats.resize(m + 1);
  for (const auto& c : problem.constraints) {
    s.block_sizes.push_back(c.size);
    const double sign = c.sense == ConstraintSense::NegativeDefinite ? -1.0 : 1.0;
    // X = sum y_i F_i - F_0, so F_0 is minus the closed constant term.
    s.mats[0].push_back(-closed_constant(c, problem.eps_margin));
    for (int i = 0; i < m; ++i) s.mats[i + 1].push_back(sign * c.coeff[i]);
  }
  return s;
}

std::string export_sdpa(const LmiProblem& problem) {
  SdpaProblem s = sdpa_view(problem);
  std::ostringstream os;
  os << "\"feasibility problem: " << problem.description << "\"\n";
  os << s.num_vars << " = mDIM\n";
  os << s.block_sizes.size() << " = nBLOCK\n";
  for (size_t j = 0; j < s.block_sizes.size(); ++j)
    os << s.block_sizes[j] << (j + 1 < s.block_sizes.size() ? " " : "");
  os << " = bLOCKsTRUCT\n";
  for (int i = 0; i < s.num_vars; ++i) os << "0.0" << (i + 1 < s.num_vars ? " " : "");
  if (s.num_vars == 0) os << "";
  os << "\n";
  char buf[64];
  for (int mat = 0; mat <= s.num_vars; ++mat) {
    for (size_t j = 0; j < s.mats[mat].size(); ++j) {
      const Eigen::MatrixXd& M = s.mats[mat][j];
      for (int r = 0; r < M.rows(); ++r)
        for (int c = r; c < M.cols(); ++c) {
          if (M(r, c) == 0.0) continue;
          std::snprintf(buf, sizeof(buf), "%.17g", M(r, c));
          os << mat << " " << (j + 1) << " " << (r + 1) << " " << (c + 1) << " "
             << buf << "\n";
        }
    }
  }
  return os.str();
}

SdpaProblem parse_sdpa(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  SdpaProblem s;
  int stage = 0;  // 0: mdim, 1: nblock, 2: struct, 3: objective, 4: entries
  int nblock = 0;
  auto strip = [](std::string l) {
    for (char& ch : l)
      if (ch == ',' || ch == '(' || ch == ')' || ch == '{' || ch == '}') ch = ' ';
    return l;
  };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const char first = line[0];
    if (first == '"' || first == '*') continue;  // comment
    std::istringstream ls(strip(line));
    if (stage == 0) {
      ls >> s.num_vars;
      stage = 1;
    } else if (stage == 1) {
      ls >> nblock;
      stage = 2;
    } else if (stage == 2) {
      int b;
      while (ls >> b) s.block_sizes.push_back(std::abs(b));
      if (static_cast<int>(s.block_sizes.size()) != nblock)
        throw std::domain_error("sdpa: block structure count mismatch");
      stage = 3;
    } else if (stage == 3) {
      double v;
      while (ls >> v) s.objective.push_back(v);
      s.mats.assign(s.num_vars + 1, {});
      for (auto& mv : s.mats)
        for (int sz : s.block_sizes) mv.push_back(Eigen::MatrixXd::Zero(sz, sz));
      stage = 4;
    } else {
      int mat, blk, r, c;
      double v;
      if (!(ls >> mat >> blk >> r >> c >> v))
        throw std::domain_error("sdpa: malformed entry line: " + line);
      if (mat < 0 || mat > s.num_vars || blk < 1 ||
          blk > static_cast<int>(s.block_sizes.size()))
        throw std::domain_error("sdpa: entry index out of range: " + line);
      Eigen::MatrixXd& M = s.mats[mat][blk - 1];
      M(r - 1, c - 1) = v;
      M(c - 1, r - 1) = v;
    }
  }
  if (stage < 4) throw std::domain_error("sdpa: truncated file");
  return s;
}

bool sdpa_equal(const SdpaProblem& a, const SdpaProblem& b, double tol) {
  if (a.num_vars != b.num_vars || a.block_sizes != b.block_sizes) return false;
  if (a.mats.size() != b.mats.size()) return false;
  for (size_t i = 0; i < a.mats.size(); ++i)
    for (size_t j = 0; j < a.mats[i].size(); ++j)
      if ((a.mats[i][j] - b.mats[i][j]).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

}  // namespace tds
