#include "tds/poly_signal.hpp"

#include <cmath>
#include <stdexcept>

namespace tds {

PolySignal::PolySignal(Eigen::MatrixXd c, double a_, double b_)
    : coeffs(std::move(c)), a(a_), b(b_) {
  if (coeffs.rows() < 1 || coeffs.cols() < 1)
    throw std::domain_error("PolySignal: empty coefficient matrix");
  if (coeffs.cols() > 6)
    throw std::domain_error("PolySignal: degree above 5 not supported");
  if (!(b > a)) throw std::domain_error("PolySignal: requires b > a");
  if (!eval(a).allFinite() || !eval(b).allFinite())
    throw std::domain_error("PolySignal: non-finite endpoint value");
}

Eigen::VectorXd PolySignal::eval(double s) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim());
  for (int j = degree(); j >= 0; --j) v = v * s + coeffs.col(j);
  return v;
}

namespace detail {

const std::vector<std::pair<double, double>>& gauss_legendre_32() {
  static const std::vector<std::pair<double, double>> table = [] {
    constexpr int n = 32;
    std::vector<std::pair<double, double>> t(n);
    for (int i = 0; i < n; ++i) {
      // Newton iteration on P_n from the Chebyshev initial guess.
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      t[i] = {x, 2.0 / ((1.0 - x * x) * pp * pp)};
    }
    return t;
  }();
  return table;
}

}  // namespace detail

namespace {

// int_lo^hi f with one 32-point panel per subinterval.
template <typename F>
double panels(double lo, double hi, int npanels, F&& f) {
  const auto& gl = detail::gauss_legendre_32();
  double total = 0.0;
  const double w = (hi - lo) / npanels;
  for (int p = 0; p < npanels; ++p) {
    const double c = lo + (p + 0.5) * w;
    double acc = 0.0;
    for (const auto& [x, wt] : gl) acc += wt * f(c + 0.5 * w * x);
    total += acc * 0.5 * w;
  }
  return total;
}

}  // namespace

Moments oracle_moments(const PolySignal& phi) {
  const int n = phi.dim();
  const int d = phi.degree();
  const double a = phi.a, b = phi.b;

  // Antiderivative coefficients iterated three times; each pass raises the
  // degree by one and fixes the constant so the result vanishes at b for the
  // inner integrals (int_s^b form) and at a for the outermost one.
  auto integrate_from = [](const Eigen::MatrixXd& c, double at) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(c.rows(), c.cols() + 1);
    for (int j = 0; j < c.cols(); ++j) out.col(j + 1) = c.col(j) / (j + 1);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(c.rows());
    for (int j = static_cast<int>(out.cols()) - 1; j >= 0; --j)
      v = v * at + out.col(j);
    out.col(0) -= v;  // now evaluates to zero at s = at
    return out;
  };

  auto value_at = [](const Eigen::MatrixXd& c, double s) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(c.rows());
    for (int j = static_cast<int>(c.cols()) - 1; j >= 0; --j)
      v = v * s + c.col(j);
    return v;
  };

  Moments m;
  Eigen::MatrixXd p1 = integrate_from(phi.coeffs, a);  // int_a^s phi
  m.m0 = value_at(p1, b);
  // int_a^b int_s^b phi du ds = int_a^b (m0 - p1(s)) ds
  Eigen::MatrixXd q = -p1;
  q.col(0) += m.m0;                                    // int_s^b phi
  Eigen::MatrixXd p2 = integrate_from(q, a);
  m.m1 = value_at(p2, b);
  Eigen::MatrixXd q2 = -p2;
  q2.col(0) += m.m1;                                   // int_s^b int_u^b phi
  Eigen::MatrixXd p3 = integrate_from(q2, a);
  m.m2 = value_at(p3, b);
  (void)d;
  (void)n;
  return m;
}

double oracle_weighted_integral(const PolySignal& phi, double alpha,
                                const Eigen::MatrixXd& R, int depth) {
  if (depth != 1 && depth != 2)
    throw std::domain_error("oracle_weighted_integral: depth must be 1 or 2");
  if (R.rows() != phi.dim() || R.cols() != phi.dim())
    throw std::domain_error("oracle_weighted_integral: R dimension mismatch");

  const double b = phi.b;
  auto integrand = [&](double s) {
    Eigen::VectorXd v = phi.eval(s);
    return std::exp(alpha * (s - b)) * v.dot(R * v);
  };

  if (depth == 1) return panels(phi.a, b, 8, integrand);
  // Nested rule: outer over s, inner over [s, b].
  return panels(phi.a, b, 8, [&](double s) { return panels(s, b, 4, integrand); });
}

}  // namespace tds
