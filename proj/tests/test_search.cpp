#include <doctest.h>

#include <cmath>

#include "tds/search.hpp"
#include "tds/system.hpp"

using namespace tds;

namespace {

SystemModel oscillator(double h) {
  Eigen::MatrixXd A0(2, 2), A1(2, 2), A2 = Eigen::MatrixXd::Zero(2, 2);
  A0 << 0, 1, -2, 0.1;
  A1 << 0, 0, 1, 0;
  return SystemModel::constant_delay(A0, A1, A2, h);
}

SystemModel interval_example(double h1, double h2) {
  Eigen::MatrixXd A(2, 2), Ad(2, 2);
  A << 0, 1, -10, -1;
  Ad << 0, 0.1, 0.1, 0.2;
  return SystemModel::interval_delay(A, Ad, h1, h2);
}

}  // namespace

TEST_CASE("decay search certifies the frozen boundary value") {
  SearchResult r = max_decay_rate(oscillator(0.8), TheoremKind::Thm41, 1.5, 1e-4);
  CHECK(r.status == SearchStatus::Ok);
  CHECK(std::abs(r.value - 0.4195) <= 2e-3);
  CHECK(r.boundary_feasible);
  CHECK(r.boundary_infeasible_above);
  CHECK(r.value == doctest::Approx(r.lo / 2.0));
}

TEST_CASE("decay search argument validation") {
  CHECK_THROWS_AS(max_decay_rate(oscillator(0.8), TheoremKind::Thm41, 1.5, 0.0),
                  std::domain_error);
  CHECK_THROWS_AS(max_decay_rate(oscillator(0.8), TheoremKind::Thm41, 0.0, 1e-4),
                  std::domain_error);
  CHECK_THROWS_AS(
      max_decay_rate(interval_example(0.3, 0.8), TheoremKind::Cor41, 1.0, 1e-4),
      std::domain_error);
}

TEST_CASE("unstable systems report NotStable") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Constant(1, 1, 1.0);
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(1, 1);
  SystemModel s = SystemModel::constant_delay(A, Z, Z, 0.5);
  SearchResult r = max_decay_rate(s, TheoremKind::Thm41, 1.0, 1e-3);
  CHECK(r.status == SearchStatus::NotStable);
  CHECK(!r.diagnostic.empty());

  SystemModel iv = SystemModel::interval_delay(A, Z, 0.1, 0.5);
  SearchResult r2 = max_upper_delay(iv, 2.0, 1e-3);
  CHECK(r2.status == SearchStatus::NotStable);
}

TEST_CASE("upper-delay search matches the frozen boundary") {
  SearchResult r = max_upper_delay(interval_example(0.7, 1.0), 6.0, 1e-3);
  CHECK(r.status == SearchStatus::Ok);
  CHECK(std::abs(r.value - 2.417) <= 0.02);
  CHECK(r.boundary_feasible);
  CHECK(r.boundary_infeasible_above);
}

TEST_CASE("upper-delay search argument validation") {
  CHECK_THROWS_AS(max_upper_delay(interval_example(1.0, 2.0), 0.5, 1e-3),
                  std::domain_error);
  CHECK_THROWS_AS(max_upper_delay(interval_example(1.0, 2.0), 3.0, 0.0),
                  std::domain_error);
  CHECK_THROWS_AS(max_upper_delay(oscillator(0.8), 3.0, 1e-3), std::domain_error);
}

TEST_CASE("upper-delay search reports an open bracket at the scan ceiling") {
  SearchResult r = max_upper_delay(interval_example(0.7, 1.0), 2.0, 1e-3);
  CHECK(r.status == SearchStatus::Ok);
  CHECK(r.value == 2.0);
  CHECK(!r.diagnostic.empty());  // asks for a larger bracket
}

TEST_CASE("interval search validation and degenerate ranges") {
  CHECK_THROWS_AS(
      feasible_delay_interval(interval_example(0.3, 0.8), 0.1, 0.1, 1.0, 1e-3),
      std::domain_error);
  CHECK_THROWS_AS(feasible_delay_interval(oscillator(0.8), 0.1, 1.0, 0.5, 1e-3),
                  std::domain_error);
  CHECK_THROWS_AS(feasible_delay_interval(oscillator(0.8), 0.1, 0.0, 1.0, 1e-3),
                  std::domain_error);

  // A scan window with no feasible point.
  Eigen::MatrixXd A = Eigen::MatrixXd::Constant(1, 1, 1.0);
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(1, 1);
  SystemModel s = SystemModel::constant_delay(A, Z, Z, 0.5);
  SearchResult r = feasible_delay_interval(s, 0.1, 0.1, 1.0, 1e-3);
  CHECK(r.status == SearchStatus::NotStable);
}

TEST_CASE("interval search brackets the oscillator's feasible window") {
  // At alpha = 0.2 the delayed oscillator is certifiable on a sub-window of
  // [0.3, 1.6]; both endpoints must come back bisected to tolerance.
  SearchResult r = feasible_delay_interval(oscillator(0.8), 0.2, 0.3, 1.6, 1e-3);
  REQUIRE(r.status == SearchStatus::Ok);
  CHECK(r.lo < r.hi);
  CHECK(r.lo >= 0.3);
  CHECK(r.hi <= 1.6);
  CHECK(r.boundary_feasible);
}
