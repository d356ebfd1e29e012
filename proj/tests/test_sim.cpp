#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tds/sim.hpp"
#include "tds/system.hpp"

using namespace tds;

namespace {

SystemModel scalar_decay() {
  Eigen::MatrixXd A0 = Eigen::MatrixXd::Constant(1, 1, -1.0);
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(1, 1);
  return SystemModel::constant_delay(A0, Z, Z, 0.5);
}

Eigen::VectorXd at_index(const Trajectory& tr, double t) {
  const int i = static_cast<int>(std::lround((t - tr.t0) / tr.step));
  return tr.states.at(i);
}

}  // namespace

TEST_CASE("pure exponential: x' = -x reproduces e^{-t}") {
  Trajectory tr = simulate(scalar_decay(), [](double) {
    return Eigen::VectorXd::Ones(1);
  }, 2.0, 1e-3);
  CHECK(tr.history_len == 501);
  CHECK(tr.t0 == doctest::Approx(-0.5));
  CHECK(std::abs(at_index(tr, 1.0)[0] - std::exp(-1.0)) < 1e-6);
  CHECK(std::abs(at_index(tr, 2.0)[0] - std::exp(-2.0)) < 1e-6);
}

TEST_CASE("pure delay: x' = -x(t-1) is piecewise polynomial") {
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(1, 1);
  Eigen::MatrixXd A1 = Eigen::MatrixXd::Constant(1, 1, -1.0);
  SystemModel s = SystemModel::constant_delay(Z, A1, Z, 1.0);
  Trajectory tr = simulate(s, [](double) {
    return Eigen::VectorXd::Ones(1);
  }, 2.0, 1e-3);
  // x(t) = 1 - t on [0, 1]; x(t) = 1 - t + (t-1)^2/2 on [1, 2].
  CHECK(std::abs(at_index(tr, 1.0)[0] - 0.0) < 1e-6);
  CHECK(std::abs(at_index(tr, 2.0)[0] - (-0.5)) < 1e-6);
}

TEST_CASE("distributed term: x' = -int_{t-h}^t x") {
  // With h = 1, phi = 1: on [0,1] the solution of x' = -int x matches the
  // series of cos-like behavior; verify against a fine reference run.
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(1, 1);
  Eigen::MatrixXd A2 = Eigen::MatrixXd::Constant(1, 1, -1.0);
  SystemModel s = SystemModel::constant_delay(Z, Z, A2, 1.0);
  auto phi = [](double) { return Eigen::VectorXd::Ones(1); };
  Trajectory fine = simulate(s, phi, 2.0, 2.5e-4);
  Trajectory coarse = simulate(s, phi, 2.0, 1e-3);
  CHECK(std::abs(at_index(coarse, 2.0)[0] - at_index(fine, 2.0)[0]) < 1e-6);
}

TEST_CASE("step halving reduces the error") {
  // The distributed term exercises the trapezoid prefix sums, whose error
  // genuinely dominates; a very fine run serves as the reference solution.
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(1, 1);
  Eigen::MatrixXd A2 = Eigen::MatrixXd::Constant(1, 1, -1.0);
  SystemModel s = SystemModel::constant_delay(Z, Z, A2, 1.0);
  auto phi = [](double) { return Eigen::VectorXd::Ones(1); };
  const double exact = at_index(simulate(s, phi, 2.0, 1e-4), 2.0)[0];
  const double e1 = std::abs(at_index(simulate(s, phi, 2.0, 8e-3), 2.0)[0] - exact);
  const double e2 = std::abs(at_index(simulate(s, phi, 2.0, 4e-3), 2.0)[0] - exact);
  CHECK(e1 > 0.0);
  CHECK(e2 <= e1 / 3.0);
}

TEST_CASE("interval-delay profile is honored and bounds are enforced") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Constant(1, 1, -1.0);
  Eigen::MatrixXd Ad = Eigen::MatrixXd::Constant(1, 1, 0.1);
  SystemModel s = SystemModel::interval_delay(A, Ad, 0.0, 1.0);
  s.profile = DelayProfile{DelayProfile::Kind::AbsSin, 0.5, 0.25};
  CHECK(s.profile->eval(0.0) == doctest::Approx(0.5));
  Trajectory tr = simulate(s, [](double) {
    return Eigen::VectorXd::Ones(1);
  }, 1.0, 1e-3);
  CHECK(tr.states.back().allFinite());

  // A profile exceeding h2 must be rejected.
  s.profile = DelayProfile{DelayProfile::Kind::AbsSin, 0.5, 2.0};
  CHECK_THROWS_AS(simulate(s, [](double) {
    return Eigen::VectorXd::Ones(1);
  }, 1.0, 1e-3), std::domain_error);
}

TEST_CASE("decay envelope of e^{-t} under sigma < 1 peaks at t = 0") {
  Trajectory tr = simulate(scalar_decay(), [](double) {
    return Eigen::VectorXd::Ones(1);
  }, 5.0, 1e-3);
  auto [sup, at] = decay_envelope(tr, 0.5);
  CHECK(sup == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(at == doctest::Approx(0.0));
  // sigma above the true rate: the envelope grows, supremum at the horizon.
  auto [sup2, at2] = decay_envelope(tr, 1.5);
  CHECK(sup2 > 1.0);
  CHECK(at2 == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("csv writer emits header plus one row per non-negative sample") {
  Trajectory tr = simulate(scalar_decay(), [](double) {
    return Eigen::VectorXd::Ones(1);
  }, 0.1, 1e-2);
  const std::string path = "test_sim_out.csv";
  write_csv(tr, 0.25, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "t,x1,env");
  int rows = 0;
  double first_t = -1.0;
  while (std::getline(in, line)) {
    if (rows == 0) first_t = std::stod(line.substr(0, line.find(',')));
    ++rows;
  }
  CHECK(rows == tr.size() - tr.history_len + 1);
  CHECK(first_t == doctest::Approx(0.0));
  std::remove(path.c_str());
}

TEST_CASE("simulate input validation") {
  CHECK_THROWS_AS(simulate(scalar_decay(), [](double) {
    return Eigen::VectorXd::Ones(1);
  }, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(simulate(scalar_decay(), [](double) {
    return Eigen::VectorXd::Ones(2);  // wrong dimension
  }, 1.0, 1e-2), std::domain_error);
}
