#include "tds/sim.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace tds {

namespace {

struct DdeError : std::domain_error {
  using std::domain_error::domain_error;
};

class Integrator {
 public:
  Integrator(const SystemModel& sys, double step, double h_max)
      : sys_(sys), s_(step), h_max_(h_max) {}

  // Linear interpolation on the stored grid; clamps to the newest sample for
  // stage times slightly past the end of the grid.
  Eigen::VectorXd state_at(const Trajectory& tr, double t) const {
    const double pos = (t - tr.t0) / s_;
    if (pos < -1e-9) throw DdeError("dde: history underflow");
    const int i = static_cast<int>(std::floor(pos));
    if (i >= tr.size() - 1) return tr.states.back();
    const double w = pos - i;
    return (1.0 - w) * tr.states[i] + w * tr.states[i + 1];
  }

  // Trapezoid integral of the state from grid start to time t, using the
  // running prefix sums; x_now supplies the value at t when t is past the
  // last stored sample.
  Eigen::VectorXd integral_to(const Trajectory& tr, double t,
                              const Eigen::VectorXd& x_now) const {
    const double pos = (t - tr.t0) / s_;
    if (pos < -1e-9) throw DdeError("dde: history underflow");
    const int i = std::min(static_cast<int>(std::floor(pos)),
                           static_cast<int>(prefix_.size()) - 1);
    const double dt = t - tr.time_at(i);
    Eigen::VectorXd xt =
        (i >= tr.size() - 1) ? x_now : state_at(tr, t);
    return prefix_[i] + 0.5 * dt * (tr.states[i] + xt);
  }

  Eigen::VectorXd deriv(const Trajectory& tr, double t,
                        const Eigen::VectorXd& x) const {
    if (sys_.kind == SystemModel::Kind::ConstantDelay) {
      Eigen::VectorXd d = sys_.A0 * x + sys_.A1 * state_at(tr, t - sys_.h);
      if (sys_.A2.cwiseAbs().maxCoeff() != 0.0)
        d += sys_.A2 * (integral_to(tr, t, x) - integral_to(tr, t - sys_.h, x));
      return d;
    }
    const double h = sys_.profile ? sys_.profile->eval(t) : sys_.h2;
    if (h < 0.0 || h > h_max_ + 1e-9) throw DdeError("dde: delay outside [0, h_max]");
    return sys_.A * x + sys_.Ad * state_at(tr, t - h);
  }

  void push_prefix(const Trajectory& tr) {
    const int i = static_cast<int>(prefix_.size());
    if (i == 0)
      prefix_.push_back(Eigen::VectorXd::Zero(sys_.n));
    else
      prefix_.push_back(prefix_.back() +
                        0.5 * s_ * (tr.states[i - 1] + tr.states[i]));
  }

 private:
  const SystemModel& sys_;
  double s_;
  double h_max_;
  std::vector<Eigen::VectorXd> prefix_;
};

}  // namespace

Trajectory simulate(const SystemModel& system,
                    const std::function<Eigen::VectorXd(double)>& phi,
                    double horizon, double step) {
  if (!(step > 0.0) || !(horizon > 0.0))
    throw std::domain_error("simulate: step and horizon must be positive");
  system.validate();
  const double h_max =
      system.kind == SystemModel::Kind::ConstantDelay ? system.h : system.h2;

  Trajectory tr;
  tr.step = step;
  const int hist = static_cast<int>(std::ceil(h_max / step));
  tr.t0 = -hist * step;
  tr.history_len = hist + 1;
  const int total = hist + static_cast<int>(std::ceil(horizon / step)) + 1;
  tr.states.reserve(total);

  Integrator integ(system, step, h_max);
  for (int i = 0; i <= hist; ++i) {
    Eigen::VectorXd v = phi(tr.t0 + i * step);
    if (v.size() != system.n)
      throw std::domain_error("simulate: initial function dimension mismatch");
    tr.states.push_back(std::move(v));
    integ.push_prefix(tr);
  }

  while (tr.size() < total) {
    const double t = tr.time_at(tr.size() - 1);
    const Eigen::VectorXd& x = tr.states.back();
    const Eigen::VectorXd k1 = integ.deriv(tr, t, x);
    const Eigen::VectorXd k2 = integ.deriv(tr, t + step / 2, x + step / 2 * k1);
    const Eigen::VectorXd k3 = integ.deriv(tr, t + step / 2, x + step / 2 * k2);
    const Eigen::VectorXd k4 = integ.deriv(tr, t + step, x + step * k3);
    Eigen::VectorXd next = x + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!next.allFinite()) {
      throw DdeError("dde: divergence at t = " + std::to_string(t));
    }
    tr.states.push_back(std::move(next));
    integ.push_prefix(tr);
  }
  return tr;
}

std::pair<double, double> decay_envelope(const Trajectory& traj, double sigma) {
  if (traj.states.empty()) throw std::domain_error("decay_envelope: empty trajectory");
  double sup = 0.0, at = 0.0;
  for (int i = traj.history_len - 1; i < traj.size(); ++i) {
    const double t = traj.time_at(i);
    const double v = std::exp(sigma * t) * traj.states[i].norm();
    if (v > sup) {
      sup = v;
      at = t;
    }
  }
  return {sup, at};
}

void write_csv(const Trajectory& traj, double sigma, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::domain_error("write_csv: cannot open " + path);
  const int n = static_cast<int>(traj.states.front().size());
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x" << i;
  out << ",env\n";
  out.precision(10);
  for (int i = traj.history_len - 1; i < traj.size(); ++i) {
    const double t = traj.time_at(i);
    out << t;
    for (int k = 0; k < n; ++k) out << "," << traj.states[i][k];
    out << "," << std::exp(sigma * t) * traj.states[i].norm() << "\n";
  }
}

}  // namespace tds
