#include <doctest.h>

#include "tds/lmi.hpp"
#include "tds/sdpa_io.hpp"
#include "tds/system.hpp"

using namespace tds;

namespace {

LmiProblem sample_problem() {
  Eigen::MatrixXd A0(2, 2), A1(2, 2), A2 = Eigen::MatrixXd::Zero(2, 2);
  A0 << 0, 1, -2, 0.1;
  A1 << 0, 0, 1, 0;
  SystemModel s = SystemModel::constant_delay(A0, A1, A2, 0.8);
  return build_theorem41(s, 0.3);
}

}  // namespace

TEST_CASE("export/parse round-trip is structurally identical") {
  LmiProblem p = sample_problem();
  const std::string text = export_sdpa(p);
  SdpaProblem parsed = parse_sdpa(text);
  SdpaProblem view = sdpa_view(p);
  CHECK(parsed.num_vars == p.total_params());
  CHECK(sdpa_equal(view, parsed, 1e-14));
  // %.17g printing round-trips doubles exactly.
  CHECK(sdpa_equal(view, parsed, 0.0));
}

TEST_CASE("header and block structure") {
  LmiProblem p = sample_problem();
  SdpaProblem v = sdpa_view(p);
  CHECK(v.num_vars == 30);
  // Main 4n x 4n constraint followed by one definiteness block per variable.
  REQUIRE(v.block_sizes.size() == 5);
  CHECK(v.block_sizes[0] == 8);
  CHECK(v.block_sizes[1] == 6);
  CHECK(v.block_sizes[2] == 2);
  CHECK(v.block_sizes[3] == 2);
  CHECK(v.block_sizes[4] == 2);
  CHECK(v.objective == std::vector<double>(30, 0.0));
  // Constant matrix of the main block carries the strictness shift: the
  // negative-definite sense is exported as X = sum y_i F_i - F_0 >= 0 with
  // F_0 = -(-constant - eps I) = eps I here (the constant term is zero).
  CHECK(v.mats[0][0].isApprox(p.eps_margin *
                              Eigen::MatrixXd::Identity(8, 8)));
}

TEST_CASE("perturbed problems compare unequal") {
  LmiProblem p = sample_problem();
  SdpaProblem a = sdpa_view(p);
  SdpaProblem b = sdpa_view(p);
  b.mats[3][0](0, 1) += 1e-9;
  CHECK(!sdpa_equal(a, b, 1e-12));
  CHECK(sdpa_equal(a, b, 1e-6));
  SdpaProblem c = sdpa_view(p);
  c.block_sizes[0] = 9;
  CHECK(!sdpa_equal(a, c, 1.0));
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(parse_sdpa("2 = mDIM\n1 = nBLOCK\n"), std::domain_error);
  CHECK_THROWS_AS(
      parse_sdpa("1 = mDIM\n1 = nBLOCK\n2 = bLOCKsTRUCT\n0.0\n0 2 1 1 1.0\n"),
      std::domain_error);
  CHECK_THROWS_AS(
      parse_sdpa("1 = mDIM\n2 = nBLOCK\n2 = bLOCKsTRUCT\n0.0\n"),
      std::domain_error);
}

TEST_CASE("parser accepts commas and braces in the block structure") {
  SdpaProblem s = parse_sdpa(
      "* comment\n2 = mDIM\n2 = nBLOCK\n{2, 1} = bLOCKsTRUCT\n0.0 0.0\n"
      "0 1 1 2 -3.5\n1 2 1 1 2.0\n");
  CHECK(s.num_vars == 2);
  REQUIRE(s.block_sizes.size() == 2);
  CHECK(s.block_sizes[1] == 1);
  CHECK(s.mats[0][0](1, 0) == -3.5);  // symmetrized
  CHECK(s.mats[1][1](0, 0) == 2.0);
}
