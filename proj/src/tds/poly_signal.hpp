#pragma once

#include <Eigen/Dense>
#include <vector>

namespace tds {

// Vector-valued polynomial phi: [a,b] -> R^n, one coefficient row per
// component, coeffs(i, j) multiplying s^j.  Degree is capped at 5.
struct PolySignal {
  Eigen::MatrixXd coeffs;  // n x (degree+1)
  double a = 0.0;
  double b = 0.0;

  PolySignal(Eigen::MatrixXd c, double a_, double b_);

  int dim() const { return static_cast<int>(coeffs.rows()); }
  int degree() const { return static_cast<int>(coeffs.cols()) - 1; }
  Eigen::VectorXd eval(double s) const;
};

struct Moments {
  Eigen::VectorXd m0;  // int_a^b phi
  Eigen::VectorXd m1;  // int_a^b int_s^b phi(u) du ds
  Eigen::VectorXd m2;  // int_a^b int_s^b int_u^b phi(v) dv du ds
};

// Closed-form iterated integrals of the polynomial.
Moments oracle_moments(const PolySignal& phi);

// Gauss-Legendre evaluation of the weighted integral
//   depth 1:  int_a^b e^{alpha(s-b)} phi'(s) R phi(s) ds
//   depth 2:  int_a^b int_s^b e^{alpha(u-b)} phi'(u) R phi(u) du ds
// 32 points per panel, 8 panels (nested for depth 2).
double oracle_weighted_integral(const PolySignal& phi, double alpha,
                                const Eigen::MatrixXd& R, int depth);

namespace detail {
// Nodes and weights on [-1,1] for the 32-point Gauss-Legendre rule.
const std::vector<std::pair<double, double>>& gauss_legendre_32();
}  // namespace detail

}  // namespace tds
