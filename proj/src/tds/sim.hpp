#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "tds/system.hpp"

namespace tds {

struct Trajectory {
  double step = 0.0;
  double t0 = 0.0;  // time of the first stored sample (start of the history)
  int history_len = 0;  // samples with t <= 0, including t = 0
  std::vector<Eigen::VectorXd> states;

  double time_at(int i) const { return t0 + i * step; }
  int size() const { return static_cast<int>(states.size()); }
};

// Fixed-step RK4 with linearly interpolated delayed states and a trapezoid
// prefix sum for the distributed term.  phi supplies the initial function on
// [-h_max, 0].
Trajectory simulate(const SystemModel& system, const std::function<Eigen::VectorXd(double)>& phi,
                    double horizon, double step);

// sup over the grid of e^{sigma t} ||x(t)|| for t >= 0, and where attained.
std::pair<double, double> decay_envelope(const Trajectory& traj, double sigma);

// "t,x1,...,xn,env" rows for t >= 0 (env uses the given sigma).
void write_csv(const Trajectory& traj, double sigma, const std::string& path);

}  // namespace tds
