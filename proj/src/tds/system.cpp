#include "tds/system.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tds {

using nlohmann::json;

double DelayProfile::eval(double t) const {
  switch (kind) {
    case Kind::Constant:
      return c0;
    case Kind::AbsSin:
      return c0 + c1 * std::abs(std::sin(t));
  }
  return c0;
}

SystemModel SystemModel::constant_delay(const Eigen::MatrixXd& A0,
                                        const Eigen::MatrixXd& A1,
                                        const Eigen::MatrixXd& A2, double h) {
  SystemModel s;
  s.kind = Kind::ConstantDelay;
  s.n = static_cast<int>(A0.rows());
  s.A0 = A0;
  s.A1 = A1;
  s.A2 = A2;
  s.h = h;
  s.validate();
  return s;
}

SystemModel SystemModel::interval_delay(const Eigen::MatrixXd& A,
                                        const Eigen::MatrixXd& Ad, double h1,
                                        double h2) {
  SystemModel s;
  s.kind = Kind::IntervalDelay;
  s.n = static_cast<int>(A.rows());
  s.A = A;
  s.Ad = Ad;
  s.h1 = h1;
  s.h2 = h2;
  s.validate();
  return s;
}

double SystemModel::matrix_scale() const {
  double m = 0.0;
  auto upd = [&m](const Eigen::MatrixXd& M) {
    if (M.size() > 0) m = std::max(m, M.cwiseAbs().maxCoeff());
  };
  if (kind == Kind::ConstantDelay) {
    upd(A0);
    upd(A1);
    upd(A2);
  } else {
    upd(A);
    upd(Ad);
  }
  return m;
}

void SystemModel::validate() const {
  if (n <= 0) throw std::domain_error("SystemModel: n must be positive");
  auto sq = [this](const Eigen::MatrixXd& M, const char* name) {
    if (M.rows() != n || M.cols() != n) {
      throw std::domain_error(std::string("SystemModel: ") + name +
                              " must be n x n");
    }
  };
  if (kind == Kind::ConstantDelay) {
    sq(A0, "A0");
    sq(A1, "A1");
    sq(A2, "A2");
    if (!(h > 0.0)) throw std::domain_error("SystemModel: h must be positive");
  } else {
    sq(A, "A");
    sq(Ad, "Ad");
    if (h1 < 0.0 || h2 < h1 || !(h2 > 0.0))
      throw std::domain_error("SystemModel: requires 0 <= h1 <= h2, h2 > 0");
  }
}

namespace {

Eigen::MatrixXd parse_matrix(const json& j, int n, const std::string& name) {
  Eigen::MatrixXd M(n, n);
  if (!j.is_array()) throw std::domain_error("config: " + name + " must be an array");
  if (!j.empty() && j[0].is_array()) {
    if (static_cast<int>(j.size()) != n)
      throw std::domain_error("config: " + name + " row count mismatch");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(j[i].size()) != n)
        throw std::domain_error("config: " + name + " column count mismatch");
      for (int k = 0; k < n; ++k) M(i, k) = j[i][k].get<double>();
    }
  } else {
    if (static_cast<int>(j.size()) != n * n)
      throw std::domain_error("config: " + name + " must hold n*n entries");
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) M(i, k) = j[i * n + k].get<double>();
  }
  return M;
}

json dump_matrix(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (int k = 0; k < M.cols(); ++k) r.push_back(M(i, k));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

SystemModel load_system_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::domain_error(std::string("config: JSON parse error: ") + e.what());
  }
  auto require = [&j](const char* key) -> const json& {
    if (!j.contains(key))
      throw std::domain_error(std::string("config: missing field \"") + key + "\"");
    return j.at(key);
  };
  const int n = require("n").get<int>();
  const std::string kind = require("kind").get<std::string>();

  SystemModel s;
  s.n = n;
  if (kind == "constant_delay") {
    s.kind = SystemModel::Kind::ConstantDelay;
    s.A0 = parse_matrix(require("A0"), n, "A0");
    s.A1 = parse_matrix(require("A1"), n, "A1");
    s.A2 = parse_matrix(require("A2"), n, "A2");
    s.h = require("h").get<double>();
  } else if (kind == "interval_delay") {
    s.kind = SystemModel::Kind::IntervalDelay;
    s.A = parse_matrix(require("A"), n, "A");
    s.Ad = parse_matrix(require("Ad"), n, "Ad");
    s.h1 = require("h1").get<double>();
    s.h2 = require("h2").get<double>();
    if (j.contains("delay_profile")) {
      const json& p = j.at("delay_profile");
      DelayProfile prof;
      const std::string type = p.at("type").get<std::string>();
      if (type == "constant") {
        prof.kind = DelayProfile::Kind::Constant;
        prof.c0 = p.at("c0").get<double>();
      } else if (type == "abs_sin") {
        prof.kind = DelayProfile::Kind::AbsSin;
        prof.c0 = p.at("c0").get<double>();
        prof.c1 = p.at("c1").get<double>();
      } else {
        throw std::domain_error("config: unknown delay_profile type \"" + type + "\"");
      }
      s.profile = prof;
    }
  } else {
    throw std::domain_error("config: kind must be constant_delay or interval_delay");
  }
  s.validate();
  return s;
}

SystemModel load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_system_json(ss.str());
}

std::string save_system_json(const SystemModel& sys) {
  json j;
  j["n"] = sys.n;
  if (sys.kind == SystemModel::Kind::ConstantDelay) {
    j["kind"] = "constant_delay";
    j["A0"] = dump_matrix(sys.A0);
    j["A1"] = dump_matrix(sys.A1);
    j["A2"] = dump_matrix(sys.A2);
    j["h"] = sys.h;
  } else {
    j["kind"] = "interval_delay";
    j["A"] = dump_matrix(sys.A);
    j["Ad"] = dump_matrix(sys.Ad);
    j["h1"] = sys.h1;
    j["h2"] = sys.h2;
    if (sys.profile) {
      json p;
      p["type"] = sys.profile->kind == DelayProfile::Kind::AbsSin ? "abs_sin"
                                                                  : "constant";
      p["c0"] = sys.profile->c0;
      if (sys.profile->kind == DelayProfile::Kind::AbsSin) p["c1"] = sys.profile->c1;
      j["delay_profile"] = p;
    }
  }
  return j.dump(2);
}

std::string builtin_config(const std::string& name) {
  if (name == "5.1") {
    return R"({
  "kind": "constant_delay", "n": 2,
  "A0": [[0.2, 0.0], [0.2, 0.1]],
  "A1": [[0.0, 0.0], [0.0, 0.0]],
  "A2": [[-1.0, 0.0], [-1.0, -1.0]],
  "h": 1.0
})";
  }
  if (name == "5.2") {
    return R"({
  "kind": "constant_delay", "n": 2,
  "A0": [[0.0, 1.0], [-2.0, 0.1]],
  "A1": [[0.0, 0.0], [1.0, 0.0]],
  "A2": [[0.0, 0.0], [0.0, 0.0]],
  "h": 1.0
})";
  }
  if (name == "5.3") {
    // Quarter-car suspension with static output feedback u = K y, K = 1:
    // ms=973, mu=114, ks=42720, kt=101115, cs=1095, ct=14.6; Ad = B*K*C.
    std::ostringstream os;
    const double ms = 973.0, mu = 114.0, ks = 42720.0, kt = 101115.0,
                 cs = 1095.0, ct = 14.6;
    Eigen::MatrixXd A(4, 4), B(4, 1), C(1, 4);
    A << 0, 0, 1, -1,
         0, 0, 0, 1,
         -ks / ms, 0, -cs / ms, cs / ms,
         ks / mu, -kt / mu, cs / mu, -(cs + ct) / mu;
    B << 0, 0, 1.0 / ms, -1.0 / mu;
    C << 1, 1, 1, 0;
    SystemModel s = SystemModel::interval_delay(A, B * C, 1.0, 6.0);
    s.profile = DelayProfile{DelayProfile::Kind::AbsSin, 1.0, 5.0};
    return save_system_json(s);
  }
  if (name == "5.4") {
    return R"({
  "kind": "interval_delay", "n": 2,
  "A": [[0.0, 1.0], [-10.0, -1.0]],
  "Ad": [[0.0, 0.1], [0.1, 0.2]],
  "h1": 0.0,
  "h2": 1.0
})";
  }
  return "";
}

}  // namespace tds
