#include <doctest.h>

#include <cmath>
#include <random>

#include "tds/lmi.hpp"
#include "tds/system.hpp"

using namespace tds;

namespace {

SystemModel random_constant(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rand_mat = [&] {
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = u(rng);
    return M;
  };
  return SystemModel::constant_delay(rand_mat(), rand_mat(), rand_mat(), 0.8);
}

SystemModel random_interval(int n, std::mt19937& rng, double h1, double h2) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rand_mat = [&] {
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = u(rng);
    return M;
  };
  return SystemModel::interval_delay(rand_mat(), rand_mat(), h1, h2);
}

Eigen::VectorXd random_params(const LmiProblem& p, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(p.total_params());
  for (int i = 0; i < v.size(); ++i) v[i] = g(rng);
  return v;
}

}  // namespace

TEST_CASE("selector and kron basics") {
  Eigen::MatrixXd e2 = selector(2, 4, 3);
  CHECK(e2.rows() == 3);
  CHECK(e2.cols() == 12);
  CHECK(e2.block(0, 3, 3, 3).isIdentity(0.0));
  CHECK(e2.leftCols(3).isZero(0.0));
  CHECK_THROWS_AS(selector(0, 4, 3), std::domain_error);
  CHECK_THROWS_AS(selector(5, 4, 3), std::domain_error);
  // selectors are orthogonal row maps: e_i e_j' = delta_ij I.
  Eigen::MatrixXd e3 = selector(3, 4, 3);
  CHECK((e2 * e2.transpose()).isIdentity(0.0));
  CHECK((e2 * e3.transpose()).isZero(0.0));

  Eigen::MatrixXd L(1, 2);
  L << 1.0, -2.0;
  Eigen::MatrixXd K = kron(L, Eigen::MatrixXd::Identity(2, 2));
  CHECK(K.rows() == 2);
  CHECK(K.cols() == 4);
  CHECK(K(0, 0) == 1.0);
  CHECK(K(0, 2) == -2.0);
  CHECK(K(1, 3) == -2.0);
  CHECK(K(1, 2) == 0.0);
}

TEST_CASE("decision-variable counts: 6n^2+3n and 10.5n^2+3.5n") {
  std::mt19937 rng(1);
  for (int n = 1; n <= 6; ++n) {
    SystemModel c = random_constant(n, rng);
    LmiProblem p41 = build_theorem41(c, 0.5);
    CHECK(variable_count(p41) == 6 * n * n + 3 * n);

    SystemModel iv = random_interval(n, rng, 0.4, 1.2);
    LmiProblem p42 = build_theorem42(iv, 0.5);
    CHECK(2 * variable_count(p42) == 21 * n * n + 7 * n);
    LmiProblem pc = build_corollary41(iv);
    CHECK(variable_count(pc) == variable_count(p42));
  }
  // Spot values used elsewhere: n = 2 -> 30, n = 4 -> 182.
  SystemModel c2 = random_constant(2, rng);
  CHECK(variable_count(build_theorem41(c2, 0.1)) == 30);
  SystemModel i4 = random_interval(4, rng, 1.0, 2.0);
  CHECK(variable_count(build_theorem42(i4, 0.1)) == 182);
}

TEST_CASE("assembled constraints are symmetric and sized as stated") {
  std::mt19937 rng(2);
  SystemModel c = random_constant(2, rng);
  LmiProblem p = build_theorem41(c, 0.7);
  REQUIRE(!p.constraints.empty());
  CHECK(p.constraints.front().size == 8);  // 4n with n = 2
  CHECK(p.eps_margin > 0.0);
  Eigen::VectorXd v = random_params(p, rng);
  for (const auto& con : p.constraints) {
    Eigen::MatrixXd M = p.evaluate(con, v);
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SystemModel iv = random_interval(2, rng, 0.4, 1.2);
  LmiProblem p42 = build_theorem42(iv, 0.3);
  CHECK(p42.constraints[0].size == 8);   // coupling block, 4n
  CHECK(p42.constraints[1].size == 14);  // 7n state
  CHECK(p42.constraints[2].size == 14);

  // h1 = 0 drops the averaged-history block: 6n state.
  SystemModel iv0 = random_interval(2, rng, 0.0, 1.0);
  LmiProblem pc = build_corollary41(iv0);
  CHECK(pc.constraints[1].size == 12);
  CHECK(pc.constraints[2].size == 12);
}

TEST_CASE("pack/unpack round-trip") {
  std::mt19937 rng(3);
  SystemModel iv = random_interval(2, rng, 0.4, 1.2);
  LmiProblem p = build_theorem42(iv, 0.3);
  Eigen::VectorXd v = random_params(p, rng);
  auto named = p.unpack(v);
  CHECK(named.count("P") == 1);
  CHECK(named.count("X") == 1);
  CHECK(named["P"].rows() == 6);
  CHECK(named["X"].rows() == 4);
  CHECK(named["P"].isApprox(named["P"].transpose()));
  Eigen::VectorXd v2 = p.pack(named);
  CHECK((v - v2).cwiseAbs().maxCoeff() == 0.0);
  named.erase("Q1");
  CHECK_THROWS_AS(p.pack(named), std::domain_error);
  CHECK_THROWS_AS(p.variable("nope"), std::domain_error);
}

TEST_CASE("builder input validation") {
  std::mt19937 rng(4);
  SystemModel c = random_constant(2, rng);
  CHECK_THROWS_AS(build_theorem41(c, 0.0), std::domain_error);
  CHECK_THROWS_AS(build_theorem41(c, -1.0), std::domain_error);
  SystemModel iv = random_interval(2, rng, 0.4, 1.2);
  CHECK_THROWS_AS(build_theorem41(iv, 0.5), std::domain_error);
  CHECK_THROWS_AS(build_theorem42(c, 0.5), std::domain_error);
  CHECK_THROWS_AS(build_theorem42(iv, 0.0), std::domain_error);
  SystemModel same = random_interval(2, rng, 1.0, 1.0);
  CHECK_THROWS_AS(build_corollary41(same), std::domain_error);
}

TEST_CASE("alpha -> 0: the exponential condition degenerates to the limit one") {
  std::mt19937 rng(5);
  for (double h1 : {0.4, 0.0}) {
    SystemModel iv = random_interval(2, rng, h1, 1.3);
    LmiProblem pa = build_theorem42(iv, 1e-8);
    LmiProblem pl = build_corollary41(iv);
    REQUIRE(pa.constraints.size() == pl.constraints.size());
    REQUIRE(pa.total_params() == pl.total_params());
    Eigen::VectorXd v = random_params(pa, rng);
    for (size_t k = 0; k < pa.constraints.size(); ++k) {
      Eigen::MatrixXd Ma = pa.evaluate(pa.constraints[k], v);
      Eigen::MatrixXd Ml = pl.evaluate(pl.constraints[k], v);
      const double scale = std::max(1.0, Ml.cwiseAbs().maxCoeff());
      CHECK((Ma - Ml).cwiseAbs().maxCoeff() <= 1e-5 * scale);
    }
  }
}
