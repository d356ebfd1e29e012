#include "tds/wii.hpp"

#include <cmath>
#include <stdexcept>

namespace tds {
namespace {

constexpr double kSeriesSwitch = 1e-3;  // x = alpha*ell below which series kick in

// Remainder series gamma_bar_k(x) = sum_{j>k} x^j/j!, exact (no cancellation).
long double gamma_bar_series(int k, long double x) {
  long double term = 1.0L;
  for (int j = 1; j <= k + 1; ++j) term *= x / j;
  long double sum = term;
  for (int j = k + 2; j < 60; ++j) {
    term *= x / j;
    sum += term;
    if (std::abs(term) < 1e-18L * std::abs(sum)) break;
  }
  return sum;
}

long double gamma_bar(int k, long double x) {
  if (std::abs(x) < kSeriesSwitch) return gamma_bar_series(k, x);
  long double g = expm1l(x);
  if (k >= 1) g -= x;
  if (k >= 2) g -= x * x / 2.0L;
  return g;
}

double horner(const long double* c, int n, double x) {
  long double acc = c[n - 1];
  for (int i = n - 2; i >= 0; --i) acc = acc * x + c[i];
  return static_cast<double>(acc);
}

// Taylor coefficients in x = alpha*ell, generated symbolically from the
// defining kernel formulas; truncation error is negligible for |x| < 1e-3.
const long double kG1[] =  // x / gamma0_bar
    {1.0L, -0.5L, 8.33333333333333333334e-02L, 0.0L, -1.38888888888888888889e-03L,
     0.0L, 3.30687830687830687831e-05L, 0.0L, -8.26719576719576719577e-07L, 0.0L,
     2.08767569878680989792e-08L, 0.0L, -5.28419013868749318478e-10L};
const long double kG3[] =  // x^2 / gamma1_bar
    {2.0L, -6.66666666666666666667e-01L, 5.55555555555555555556e-02L,
     3.70370370370370370370e-03L, -3.08641975308641975309e-04L,
     -7.34861845972957075179e-05L, -4.89907897315304716786e-07L,
     1.14311842706904433850e-06L, 8.84555925708189074939e-08L,
     -1.26600778178281601858e-08L, -2.35155005224898762873e-09L,
     4.62480321822321049873e-11L, 4.23461953897935623857e-11L};
const long double kQ1[] =  // x*gamma0_bar / gamma1_bar
    {2.0L, 3.33333333333333333333e-01L, 5.55555555555555555556e-02L,
     3.70370370370370370370e-03L, -3.08641975308641975309e-04L,
     -7.34861845972957075179e-05L, -4.89907897315304716786e-07L,
     1.14311842706904433850e-06L, 8.84555925708189074939e-08L,
     -1.26600778178281601858e-08L, -2.35155005224898762873e-09L,
     4.62480321822321049873e-11L, 4.23461953897935623857e-11L};
const long double kQ2[] =  // x*gamma1_bar / gamma2_bar
    {3.0L, 2.5e-01L, 3.75e-02L, 3.125e-03L, 2.23214285714285714286e-05L,
     -2.79017857142857142857e-05L, -2.82118055555555555556e-06L,
     5.42534722222222222222e-08L, 3.75093811198721896423e-08L,
     2.79697283743042664990e-09L, -1.85105034784164258127e-10L,
     -4.97580780609519472894e-11L, -2.33888598753994786489e-12L};
const long double kA[] =  // A_alpha / ell^2
    {0.0L, 8.33333333333333333333e-02L, 4.16666666666666666667e-02L,
     9.72222222222222222222e-03L, 1.38888888888888888889e-03L,
     1.65343915343915343915e-04L, 2.48015873015873015873e-05L,
     3.58245149911816578483e-06L, 2.75573192239858906526e-07L,
     4.17535139757361979584e-09L, 2.08767569878680989792e-09L,
     6.89009452236965429561e-10L, 1.14707455977297245073e-11L};
const long double kB[] =  // B_alpha / ell^2
    {0.0L, 0.0L, 2.77777777777777777778e-02L, 1.29629629629629629630e-02L,
     3.08641975308641975309e-03L, 4.70311581422692533804e-04L,
     5.00930825004899089414e-05L, 4.36834541772813415367e-06L,
     4.62690791908898890367e-07L, 6.27642945887116018455e-08L,
     6.52690144982260731128e-09L, 2.74932844554200167721e-10L,
     -1.94047041943341136110e-11L};
const long double kR2[] =  // x / rho0
    {3.0L, -2.5L, 9.83333333333333333333e-01L, -2.33333333333333333333e-01L,
     3.48809523809523809524e-02L, -2.93650793650793650794e-03L,
     4.10052910052910052910e-05L, 1.85185185185185185185e-05L,
     -1.77698183650564612216e-06L, 6.84280446185208055428e-08L,
     1.42787841200539618887e-10L, -2.83887188649093407716e-09L,
     5.81489456206009456922e-10L};
const long double kR4[] =  // 4 x^2 / rho1
    {16.0L, -1.01333333333333333333e+01L, 2.88444444444444444444e+00L,
     -4.61417989417989417989e-01L, 4.03372134038800705467e-02L,
     -9.87466196355085172005e-04L, -1.56326418633296953479e-04L,
     1.26686317275382527277e-05L, 5.59959167272512351852e-07L,
     -1.30844644217506106808e-07L, 2.94933865820085890198e-09L,
     1.18856369677915661752e-09L, -1.00950394056188536279e-10L};
const long double kRho0[] =
    {0.0L, 3.33333333333333333333e-01L, 2.77777777777777777778e-01L,
     1.22222222222222222222e-01L, 3.67283950617283950617e-02L,
     8.27454438565549735450e-03L, 1.45943562610229276896e-03L,
     2.06904435299497028464e-04L, 2.43661136150848086420e-05L,
     2.55333562946731669837e-06L, 2.64717769535197196231e-07L,
     2.79123867916952584682e-08L, 2.54958201128210043842e-09L};
const long double kRho1[] =
    {0.0L, 0.0L, 2.5e-01L, 1.58333333333333333333e-01L,
     5.52083333333333333333e-02L, 1.36309523809523809524e-02L,
     2.61594742063492063492e-03L, 4.07800099206349206349e-04L,
     5.28041294642857142857e-05L, 5.75728542153393343716e-06L,
     5.38809758896719437643e-07L, 4.54561935856113676493e-08L,
     3.81311757368731297865e-09L};
const long double kRho0AltNum[] =  // (gamma0_bar^2 - x^2 e^x) / x^4
    {8.33333333333333333333e-02L, 8.33333333333333333333e-02L,
     4.44444444444444444444e-02L, 1.66666666666666666667e-02L,
     4.91071428571428571429e-03L, 1.20701058201058201058e-03L,
     2.56834215167548500881e-04L, 4.85008818342151675485e-05L,
     8.27137111859334126040e-06L, 1.29018358185024849227e-06L,
     1.85826078683221543985e-07L, 2.48961062453125941262e-08L};

constexpr int kNumCoef = 13;

bool small_x(double x) { return std::abs(x) < kSeriesSwitch; }

}  // namespace

namespace detail {

double ratio_single_jensen(double x) {
  if (small_x(x)) return horner(kG1, kNumCoef, x);
  return static_cast<double>(static_cast<long double>(x) / gamma_bar(0, x));
}

double ratio_double_jensen(double x) {
  if (small_x(x)) return horner(kG3, kNumCoef, x);
  long double xl = x;
  return static_cast<double>(xl * xl / gamma_bar(1, x));
}

double ratio_l1(double x) {
  if (small_x(x)) return horner(kQ1, kNumCoef, x);
  return static_cast<double>(static_cast<long double>(x) * gamma_bar(0, x) /
                             gamma_bar(1, x));
}

double ratio_l2(double x) {
  if (small_x(x)) return horner(kQ2, kNumCoef, x);
  return static_cast<double>(static_cast<long double>(x) * gamma_bar(1, x) /
                             gamma_bar(2, x));
}

double a_of_x(double x) {
  if (small_x(x)) return horner(kA, kNumCoef, x);
  long double g0 = gamma_bar(0, x);
  long double xl = x;
  return static_cast<double>(g0 / (xl * xl) - (1.0L + g0) / g0);
}

double b_of_x(double x) {
  if (small_x(x)) return horner(kB, kNumCoef, x);
  long double g0 = gamma_bar(0, x);
  long double g1 = gamma_bar(1, x);
  long double xl = x;
  return static_cast<double>(2.0L * g1 / (xl * xl) - (xl * g0 - g1) / g1);
}

double rho0_of_x(double x) {
  if (small_x(x)) return horner(kRho0, kNumCoef, x);
  long double q1 = static_cast<long double>(x) * gamma_bar(0, x) / gamma_bar(1, x);
  return static_cast<double>(q1 * q1 * static_cast<long double>(a_of_x(x)));
}

double rho1_of_x(double x) {
  if (small_x(x)) return horner(kRho1, kNumCoef, x);
  long double q2 = static_cast<long double>(x) * gamma_bar(1, x) / gamma_bar(2, x);
  return static_cast<double>(q2 * q2 * static_cast<long double>(b_of_x(x)));
}

double ratio_single_refine(double x) {
  if (small_x(x)) return horner(kR2, kNumCoef, x);
  return x / rho0_of_x(x);
}

double ratio_double_refine(double x) {
  if (small_x(x)) return horner(kR4, kNumCoef, x);
  return 4.0 * x * x / rho1_of_x(x);
}

double rho0_alt_numerator(double x) {
  if (small_x(x)) return horner(kRho0AltNum, 12, x);
  long double g0 = gamma_bar(0, x);
  long double xl = x;
  long double num = g0 * g0 - xl * xl * expl(xl);
  return static_cast<double>(num / (xl * xl * xl * xl));
}

}  // namespace detail

double gamma_k(int k, double alpha, double ell) {
  if (k < 0 || k > 2) throw std::domain_error("gamma_k: k must be in {0,1,2}");
  if (!(ell > 0.0)) throw std::domain_error("gamma_k: ell must be positive");
  if (alpha < 0.0) throw std::domain_error("gamma_k: alpha must be nonnegative");
  return static_cast<double>(gamma_bar(k, static_cast<long double>(alpha) * ell));
}

WiiCoefficients build_coefficients(double alpha, double ell) {
  if (!(ell > 0.0)) throw std::domain_error("build_coefficients: ell must be positive");
  if (alpha < 0.0) throw std::domain_error("build_coefficients: alpha must be nonnegative");

  WiiCoefficients c;
  c.alpha = alpha;
  c.ell = ell;
  c.limit_mode = (alpha == 0.0);

  const double x = alpha * ell;
  c.gamma0 = gamma_k(0, alpha, ell);
  c.gamma1 = gamma_k(1, alpha, ell);
  c.gamma2 = gamma_k(2, alpha, ell);
  c.a_alpha = ell * ell * detail::a_of_x(x);
  c.b_alpha = ell * ell * detail::b_of_x(x);
  c.rho0 = detail::rho0_of_x(x);
  c.rho1 = detail::rho1_of_x(x);

  c.r_single_jensen = detail::ratio_single_jensen(x) / ell;
  c.r_single_refine = detail::ratio_single_refine(x) / ell;
  c.r_double_jensen = detail::ratio_double_jensen(x) / (ell * ell);
  c.r_double_refine = detail::ratio_double_refine(x) / (ell * ell);
  c.l1 << 1.0, -detail::ratio_l1(x) / ell;
  c.l2 << 1.0, -detail::ratio_l2(x) / ell;
  return c;
}

namespace {

void check_bound_inputs(const Eigen::MatrixXd& R, const Eigen::VectorXd& u,
                        const Eigen::VectorXd& v) {
  const auto n = R.rows();
  if (R.cols() != n || u.size() != n || v.size() != n)
    throw std::domain_error("bound: dimension mismatch");
  if (!R.isApprox(R.transpose(), 1e-12))
    throw std::domain_error("bound: R must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(R);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("bound: R must be positive definite");
}

}  // namespace

double single_bound(const WiiCoefficients& c, const Eigen::MatrixXd& R,
                    const Eigen::VectorXd& m0, const Eigen::VectorXd& m1) {
  check_bound_inputs(R, m0, m1);
  Eigen::VectorXd u = m0 + c.l1(1) * m1;  // (L1 (x) I) zeta
  return c.r_single_jensen * m0.dot(R * m0) + c.r_single_refine * u.dot(R * u);
}

double double_bound(const WiiCoefficients& c, const Eigen::MatrixXd& R,
                    const Eigen::VectorXd& d1, const Eigen::VectorXd& d2) {
  check_bound_inputs(R, d1, d2);
  Eigen::VectorXd u = d1 + c.l2(1) * d2;  // (L2 (x) I) zeta_hat
  return c.r_double_jensen * d1.dot(R * d1) + c.r_double_refine * u.dot(R * u);
}

}  // namespace tds
