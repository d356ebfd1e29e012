#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "tds.h"

namespace {

struct Handle {
  tds_system* sys = nullptr;
  ~Handle() { tds_system_free(sys); }
};

}  // namespace

TEST_CASE("builtin configs") {
  for (const char* name : {"5.1", "5.2", "5.3", "5.4"}) {
    const char* text = tds_builtin_config(name);
    REQUIRE(text != nullptr);
    Handle h;
    CHECK(tds_system_from_json(text, &h.sys) == TDS_OK);
  }
  CHECK(tds_builtin_config("9.9") == nullptr);
}

TEST_CASE("json round-trip and file loading") {
  Handle h;
  REQUIRE(tds_system_from_json(tds_builtin_config("5.4"), &h.sys) == TDS_OK);
  char* out = nullptr;
  REQUIRE(tds_system_to_json(h.sys, &out) == TDS_OK);
  REQUIRE(out != nullptr);
  const std::string text(out);
  tds_string_free(out);
  CHECK(text.find("interval_delay") != std::string::npos);
  CHECK(text.find("\"Ad\"") != std::string::npos);

  const char* path = "test_capi_config.json";
  {
    std::ofstream f(path);
    f << text;
  }
  Handle h2;
  CHECK(tds_system_from_file(path, &h2.sys) == TDS_OK);
  char* out2 = nullptr;
  REQUIRE(tds_system_to_json(h2.sys, &out2) == TDS_OK);
  CHECK(text == out2);  // load(save(config)) is structurally identical
  tds_string_free(out2);
  std::remove(path);

  Handle missing;
  CHECK(tds_system_from_file("no_such_file.json", &missing.sys) == TDS_ERR_IO);
  CHECK(std::strlen(tds_last_error()) > 0);
}

TEST_CASE("parse errors carry messages") {
  Handle h;
  CHECK(tds_system_from_json("{\"kind\": \"constant_delay\"}", &h.sys) ==
        TDS_ERR_PARSE);
  CHECK(std::strlen(tds_last_error()) > 0);
  CHECK(tds_system_from_json("not json", &h.sys) == TDS_ERR_PARSE);
  CHECK(tds_system_from_json(nullptr, &h.sys) == TDS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("delay overrides respect the system kind") {
  Handle c;
  REQUIRE(tds_system_from_json(tds_builtin_config("5.2"), &c.sys) == TDS_OK);
  CHECK(tds_system_set_delay(c.sys, 0.8) == TDS_OK);
  CHECK(tds_system_set_delay(c.sys, -1.0) == TDS_ERR_INVALID_ARGUMENT);
  CHECK(tds_system_set_delay_bounds(c.sys, 0.1, 0.5) == TDS_ERR_INVALID_ARGUMENT);

  Handle iv;
  REQUIRE(tds_system_from_json(tds_builtin_config("5.4"), &iv.sys) == TDS_OK);
  CHECK(tds_system_set_delay_bounds(iv.sys, 0.3, 1.2) == TDS_OK);
  CHECK(tds_system_set_delay_bounds(iv.sys, 2.0, 1.0) == TDS_ERR_INVALID_ARGUMENT);
  CHECK(tds_system_set_delay(iv.sys, 0.8) == TDS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("analyze across the feasibility boundary") {
  Handle h;
  REQUIRE(tds_system_from_json(tds_builtin_config("5.2"), &h.sys) == TDS_OK);
  REQUIRE(tds_system_set_delay(h.sys, 1.6) == TDS_OK);
  tds_analysis a;
  REQUIRE(tds_analyze(h.sys, TDS_THEOREM_41, 0.09, &a) == TDS_OK);
  CHECK(a.verdict == TDS_FEASIBLE);
  CHECK(a.decision_variables == 30);
  CHECK(a.margin > 0.0);
  REQUIRE(tds_analyze(h.sys, TDS_THEOREM_41, 0.2, &a) == TDS_OK);
  CHECK(a.verdict == TDS_INFEASIBLE);
  // Mismatched theorem/system kinds surface as invalid arguments.
  CHECK(tds_analyze(h.sys, TDS_THEOREM_42, 0.1, &a) == TDS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("search report is JSON with the certified value") {
  Handle h;
  REQUIRE(tds_system_from_json(tds_builtin_config("5.2"), &h.sys) == TDS_OK);
  REQUIRE(tds_system_set_delay(h.sys, 0.8) == TDS_OK);
  tds_search_params p;
  tds_search_params_init(&p);
  p.alpha_hi = 1.5;
  char* report = nullptr;
  REQUIRE(tds_search(h.sys, TDS_SEARCH_DECAY, &p, &report) == TDS_OK);
  REQUIRE(report != nullptr);
  const std::string text(report);
  tds_string_free(report);
  CHECK(text.find("\"mode\"") != std::string::npos);
  CHECK(text.find("\"result\"") != std::string::npos);
  CHECK(text.find("\"checks\"") != std::string::npos);
  // The certified sigma appears as 0.419x.
  CHECK(text.find("0.419") != std::string::npos);
}

TEST_CASE("search on an unstable system returns NOT_STABLE with a report") {
  const char* cfg = R"({"kind": "constant_delay", "n": 1,
    "A0": [[1.0]], "A1": [[0.0]], "A2": [[0.0]], "h": 0.5})";
  Handle h;
  REQUIRE(tds_system_from_json(cfg, &h.sys) == TDS_OK);
  tds_search_params p;
  tds_search_params_init(&p);
  char* report = nullptr;
  CHECK(tds_search(h.sys, TDS_SEARCH_DECAY, &p, &report) == TDS_ERR_NOT_STABLE);
  REQUIRE(report != nullptr);
  CHECK(std::string(report).find("not_stable") != std::string::npos);
  tds_string_free(report);
}

TEST_CASE("sdpa export writes a parsable file") {
  Handle h;
  REQUIRE(tds_system_from_json(tds_builtin_config("5.2"), &h.sys) == TDS_OK);
  const char* path = "test_capi_export.dat-s";
  REQUIRE(tds_export_sdpa(h.sys, TDS_THEOREM_41, 0.3, path) == TDS_OK);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // comment
  std::getline(in, line);
  CHECK(line.find("30") != std::string::npos);  // mDIM
  in.close();
  std::remove(path);
}

TEST_CASE("simulate reports the envelope and writes CSV on demand") {
  Handle h;
  REQUIRE(tds_system_from_json(tds_builtin_config("5.2"), &h.sys) == TDS_OK);
  REQUIRE(tds_system_set_delay(h.sys, 1.6) == TDS_OK);
  const double phi[2] = {2.0, -1.0};
  double sup = 0.0, at = -1.0;
  const char* csv = "test_capi_sim.csv";
  REQUIRE(tds_simulate(h.sys, phi, 2, 0.045, 5.0, 1e-3, csv, &sup, &at) == TDS_OK);
  CHECK(sup >= std::hypot(2.0, -1.0) - 1e-9);  // envelope includes t = 0
  CHECK(at >= 0.0);
  std::ifstream in(csv);
  REQUIRE(in.good());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "t,x1,x2,env");
  in.close();
  std::remove(csv);

  CHECK(tds_simulate(h.sys, phi, 1, 0.045, 5.0, 1e-3, nullptr, &sup, &at) ==
        TDS_ERR_INVALID_ARGUMENT);  // phi length mismatch
}
