#include "tds.h"

#include <cstring>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "tds/lmi.hpp"
#include "tds/sdp.hpp"
#include "tds/sdpa_io.hpp"
#include "tds/search.hpp"
#include "tds/sim.hpp"
#include "tds/system.hpp"

using nlohmann::json;

struct tds_system {
  tds::SystemModel model;
};

namespace {

thread_local std::string g_last_error;

tds_status fail(tds_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
tds_status guarded(F&& f) {
  try {
    return f();
  } catch (const std::domain_error& e) {
    return fail(TDS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(TDS_ERR_INTERNAL, e.what());
  }
}

tds::LmiProblem build_problem(const tds::SystemModel& model, tds_theorem theorem,
                              double alpha) {
  switch (theorem) {
    case TDS_THEOREM_41:
      return tds::build_theorem41(model, alpha);
    case TDS_THEOREM_42:
      return tds::build_theorem42(model, alpha);
    case TDS_COROLLARY_41:
      return tds::build_corollary41(model);
  }
  throw std::domain_error("unknown theorem selector");
}

}  // namespace

extern "C" {

const char* tds_last_error(void) { return g_last_error.c_str(); }

tds_status tds_system_from_json(const char* text, tds_system** out) {
  if (!text || !out) return fail(TDS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    try {
      auto* sys = new tds_system{tds::load_system_json(text)};
      *out = sys;
      return TDS_OK;
    } catch (const std::domain_error& e) {
      return fail(TDS_ERR_PARSE, e.what());
    }
  });
}

tds_status tds_system_from_file(const char* path, tds_system** out) {
  if (!path || !out) return fail(TDS_ERR_INVALID_ARGUMENT, "null argument");
  std::ifstream in(path);
  if (!in) return fail(TDS_ERR_IO, std::string("cannot open ") + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return tds_system_from_json(text.c_str(), out);
}

void tds_system_free(tds_system* sys) { delete sys; }

tds_status tds_system_to_json(const tds_system* sys, char** out) {
  if (!sys || !out) return fail(TDS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup_string(tds::save_system_json(sys->model));
    return TDS_OK;
  });
}

const char* tds_builtin_config(const char* name) {
  static thread_local std::string storage;
  if (!name) return nullptr;
  storage = tds::builtin_config(name);
  return storage.empty() ? nullptr : storage.c_str();
}

tds_status tds_system_set_delay(tds_system* sys, double h) {
  if (!sys) return fail(TDS_ERR_INVALID_ARGUMENT, "null system");
  return guarded([&] {
    if (sys->model.kind != tds::SystemModel::Kind::ConstantDelay)
      return fail(TDS_ERR_INVALID_ARGUMENT, "set_delay requires a constant-delay system");
    tds::SystemModel m = sys->model;
    m.h = h;
    m.validate();
    sys->model = m;
    return TDS_OK;
  });
}

tds_status tds_system_set_delay_bounds(tds_system* sys, double h1, double h2) {
  if (!sys) return fail(TDS_ERR_INVALID_ARGUMENT, "null system");
  return guarded([&] {
    if (sys->model.kind != tds::SystemModel::Kind::IntervalDelay)
      return fail(TDS_ERR_INVALID_ARGUMENT,
                  "set_delay_bounds requires an interval-delay system");
    tds::SystemModel m = sys->model;
    m.h1 = h1;
    m.h2 = h2;
    m.validate();
    sys->model = m;
    return TDS_OK;
  });
}

tds_status tds_analyze(const tds_system* sys, tds_theorem theorem, double alpha,
                       tds_analysis* out) {
  if (!sys || !out) return fail(TDS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    tds::LmiProblem problem = build_problem(sys->model, theorem, alpha);
    tds::FeasibilityResult r = tds::check_feasible(problem);
    out->verdict = r.verdict == tds::Verdict::Feasible     ? TDS_FEASIBLE
                   : r.verdict == tds::Verdict::Infeasible ? TDS_INFEASIBLE
                                                           : TDS_INCONCLUSIVE;
    out->margin = r.margin;
    out->decision_variables = tds::variable_count(problem);
    out->iterations = r.stats.iterations;
    out->wall_seconds = r.stats.wall_seconds;
    return TDS_OK;
  });
}

tds_status tds_export_sdpa(const tds_system* sys, tds_theorem theorem,
                           double alpha, const char* path) {
  if (!sys || !path) return fail(TDS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    tds::LmiProblem problem = build_problem(sys->model, theorem, alpha);
    std::ofstream out(path);
    if (!out) return fail(TDS_ERR_IO, std::string("cannot open ") + path);
    out << tds::export_sdpa(problem);
    return TDS_OK;
  });
}

void tds_search_params_init(tds_search_params* params) {
  if (!params) return;
  params->tol = 0.0;  // 0 = per-mode default
  params->alpha = 2e-4;
  params->alpha_hi = 4.0;
  params->lo = 0.01;
  params->hi = 10.0;
}

tds_status tds_search(const tds_system* sys, tds_search_mode mode,
                      const tds_search_params* params, char** report_json) {
  if (!sys || !report_json) return fail(TDS_ERR_INVALID_ARGUMENT, "null argument");
  tds_search_params p;
  tds_search_params_init(&p);
  if (params) p = *params;

  return guarded([&]() -> tds_status {
    tds::SearchResult r;
    json report;
    if (mode == TDS_SEARCH_DECAY) {
      const double tol = p.tol > 0 ? p.tol : 1e-4;
      const auto theorem = sys->model.kind == tds::SystemModel::Kind::ConstantDelay
                               ? tds::TheoremKind::Thm41
                               : tds::TheoremKind::Thm42;
      r = tds::max_decay_rate(sys->model, theorem, p.alpha_hi, tol);
      report["mode"] = "decay";
      report["result"] = r.value;
    } else if (mode == TDS_SEARCH_H2) {
      const double tol = p.tol > 0 ? p.tol : 1e-3;
      r = tds::max_upper_delay(sys->model, p.hi, tol);
      report["mode"] = "h2";
      report["result"] = r.value;
    } else if (mode == TDS_SEARCH_INTERVAL) {
      const double tol = p.tol > 0 ? p.tol : 1e-3;
      r = tds::feasible_delay_interval(sys->model, p.alpha, p.lo, p.hi, tol);
      report["mode"] = "interval";
      report["result"] = {r.lo, r.hi};
    } else {
      return fail(TDS_ERR_INVALID_ARGUMENT, "unknown search mode");
    }
    report["status"] = r.status == tds::SearchStatus::Ok          ? "ok"
                       : r.status == tds::SearchStatus::NotStable ? "not_stable"
                                                                  : "ambiguous";
    report["bracket"] = {r.lo, r.hi};
    report["checks"] = {{"boundary_feasible", r.boundary_feasible},
                        {"boundary_infeasible_above", r.boundary_infeasible_above}};
    if (!r.diagnostic.empty()) report["diagnostic"] = r.diagnostic;
    *report_json = dup_string(report.dump(2));
    if (r.status == tds::SearchStatus::NotStable)
      return fail(TDS_ERR_NOT_STABLE, "no certificate found");
    if (r.status == tds::SearchStatus::Ambiguous)
      return fail(TDS_ERR_AMBIGUOUS, r.diagnostic);
    return TDS_OK;
  });
}

tds_status tds_simulate(const tds_system* sys, const double* phi, size_t phi_len,
                        double sigma, double horizon, double step,
                        const char* csv_path, double* sup_env, double* argmax_t) {
  if (!sys || !phi) return fail(TDS_ERR_INVALID_ARGUMENT, "null argument");
  if (static_cast<int>(phi_len) != sys->model.n)
    return fail(TDS_ERR_INVALID_ARGUMENT, "phi length must equal n");
  return guarded([&]() -> tds_status {
    Eigen::VectorXd x0(phi_len);
    for (size_t i = 0; i < phi_len; ++i) x0[i] = phi[i];
    tds::Trajectory tr;
    try {
      tr = tds::simulate(sys->model, [&](double) { return x0; }, horizon, step);
    } catch (const std::domain_error& e) {
      if (std::string(e.what()).find("divergence") != std::string::npos)
        return fail(TDS_ERR_DIVERGED, e.what());
      throw;
    }
    auto [sup, at] = tds::decay_envelope(tr, sigma);
    if (sup_env) *sup_env = sup;
    if (argmax_t) *argmax_t = at;
    if (csv_path) tds::write_csv(tr, sigma, csv_path);
    return TDS_OK;
  });
}

void tds_string_free(char* text) { delete[] text; }

}  // extern "C"
