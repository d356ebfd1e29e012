#pragma once

#include <Eigen/Dense>

namespace tds {

// Scalar kernels and row vectors of the weighted integral inequalities for
// one decay parameter alpha and interval length ell = b - a.  When alpha == 0
// the stored quantities are the finite limits of the composite ratios that the
// LMI builders and bound evaluators actually consume, so callers never divide
// by a vanishing kernel.
struct WiiCoefficients {
  double alpha = 0.0;
  double ell = 0.0;

  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double a_alpha = 0.0;
  double b_alpha = 0.0;
  double rho0 = 0.0;
  double rho1 = 0.0;

  // Composite ratios; limits at alpha = 0 are 1/ell, 3/ell, 2/ell^2, 16/ell^2.
  double r_single_jensen = 0.0;  // alpha / gamma0
  double r_single_refine = 0.0;  // alpha / rho0
  double r_double_jensen = 0.0;  // alpha^2 / gamma1
  double r_double_refine = 0.0;  // 4 alpha^2 / rho1

  Eigen::RowVector2d l1{1.0, 0.0};  // [1, -alpha*gamma0/gamma1]
  Eigen::RowVector2d l2{1.0, 0.0};  // [1, -alpha*gamma1/gamma2]

  bool limit_mode = false;
};

// gamma_k = e^{alpha*ell} - sum_{j=0}^{k} (alpha*ell)^j / j!, k in {0,1,2}.
// Switches to a truncated Taylor series of the remainder for alpha*ell < 1e-3.
double gamma_k(int k, double alpha, double ell);

WiiCoefficients build_coefficients(double alpha, double ell);

// Refined single bound: r_single_jensen * m0'R m0
//                     + r_single_refine * (m0 + l1[1] m1)' R (m0 + l1[1] m1)
// with zeta = col{m0, m1}.  In limit mode this equals the Wirtinger form.
double single_bound(const WiiCoefficients& c, const Eigen::MatrixXd& R,
                    const Eigen::VectorXd& m0, const Eigen::VectorXd& m1);

// Refined double bound with zeta_hat = col{d1, d2}.
double double_bound(const WiiCoefficients& c, const Eigen::MatrixXd& R,
                    const Eigen::VectorXd& d1, const Eigen::VectorXd& d2);

namespace detail {
// Dimensionless kernel ratios as functions of x = alpha*ell, usable down to
// x = 0 (each has a finite limit there).
double ratio_single_jensen(double x);  // x/gamma0_bar            -> 1
double ratio_double_jensen(double x);  // x^2/gamma1_bar           -> 2
double ratio_l1(double x);             // x*gamma0_bar/gamma1_bar  -> 2
double ratio_l2(double x);             // x*gamma1_bar/gamma2_bar  -> 3
double ratio_single_refine(double x);  // x/rho0                   -> 3
double ratio_double_refine(double x);  // 4x^2/rho1                -> 16
double a_of_x(double x);               // A_alpha / ell^2
double b_of_x(double x);               // B_alpha / ell^2
double rho0_of_x(double x);
double rho1_of_x(double x);
// (gamma0_bar^2 - x^2 e^x) / x^4, the cancellation-prone factor of the
// second rho0 formula in closed form; exposed for the two-route identity.
double rho0_alt_numerator(double x);
}  // namespace detail

}  // namespace tds
