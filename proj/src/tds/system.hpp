#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

namespace tds {

// Time-varying delay profile h(t); "abs_sin" is h(t) = c0 + c1*|sin t|.
struct DelayProfile {
  enum class Kind { Constant, AbsSin };
  Kind kind = Kind::Constant;
  double c0 = 0.0;
  double c1 = 0.0;

  double eval(double t) const;
};

struct SystemModel {
  enum class Kind { ConstantDelay, IntervalDelay };
  Kind kind = Kind::ConstantDelay;
  int n = 0;

  // ConstantDelay: xdot = A0 x(t) + A1 x(t-h) + A2 int_{t-h}^t x(s) ds
  Eigen::MatrixXd A0, A1, A2;
  double h = 0.0;

  // IntervalDelay: xdot = A x(t) + Ad x(t-h(t)),  h1 <= h(t) <= h2
  Eigen::MatrixXd A, Ad;
  double h1 = 0.0;
  double h2 = 0.0;
  std::optional<DelayProfile> profile;

  static SystemModel constant_delay(const Eigen::MatrixXd& A0,
                                    const Eigen::MatrixXd& A1,
                                    const Eigen::MatrixXd& A2, double h);
  static SystemModel interval_delay(const Eigen::MatrixXd& A,
                                    const Eigen::MatrixXd& Ad, double h1,
                                    double h2);

  // Largest entry magnitude over the system matrices; used for the
  // scale-relative strictness margin of the LMIs.
  double matrix_scale() const;
  void validate() const;
};

// JSON config format (see README): {"kind": "constant_delay"|"interval_delay",
// "n": ..., matrices as row-major flat arrays or nested rows, delays, optional
// "delay_profile": {"type": "abs_sin", "c0": ..., "c1": ...}}.
SystemModel load_system_json(const std::string& text);
SystemModel load_system_file(const std::string& path);
std::string save_system_json(const SystemModel& sys);

// Bundled example configs: "5.1", "5.2", "5.3", "5.4".  Returns empty string
// for unknown names.
std::string builtin_config(const std::string& name);

}  // namespace tds
