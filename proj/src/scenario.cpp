#include "geotrack/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "geotrack/errors.hpp"

namespace geotrack {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorKind::ConfigError, "line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& tok, int line) {
  try {
    size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) fail(line, "bad number '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(line, "bad number '" + tok + "'");
  }
}

// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

ConfigValue parse_value(const std::string& raw, int line) {
  const std::string v = trim(raw);
  if (v.empty()) fail(line, "missing value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') fail(line, "unterminated string");
    return v.substr(1, v.size() - 2);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '[') {
    if (v.back() != ']') fail(line, "unterminated array");
    std::vector<double> out;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) continue;
      out.push_back(parse_number(t, line));
    }
    return out;
  }
  return parse_number(v, line);
}

}  // namespace

ConfigDoc parse_config(const std::string& text) {
  ConfigDoc doc;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "bad section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail(line, "empty section name");
      if (doc.sections.count(section)) fail(line, "duplicate section [" + section + "]");
      doc.sections[section];
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    if (section.empty()) fail(line, "key outside of a section");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) fail(line, "empty key");
    auto& sec = doc.sections[section];
    if (sec.count(key)) fail(line, "duplicate key '" + key + "'");
    sec[key] = parse_value(s.substr(eq + 1), line);
  }
  return doc;
}

ConfigDoc load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

namespace {

// Typed access to one section; remembers which keys were consumed so unknown
// keys (usually typos) can be rejected.
class Section {
 public:
  Section(const ConfigDoc& doc, const std::string& name) : name_(name) {
    const auto it = doc.sections.find(name);
    if (it != doc.sections.end()) values_ = &it->second;
  }

  bool has(const std::string& k) const { return values_ && values_->count(k); }

  double num(const std::string& k, double fallback) {
    if (!has(k)) return fallback;
    used_.insert(k);
    const ConfigValue& v = values_->at(k);
    if (!std::holds_alternative<double>(v)) bad(k, "a number");
    return std::get<double>(v);
  }

  std::string str(const std::string& k, const std::string& fallback) {
    if (!has(k)) return fallback;
    used_.insert(k);
    const ConfigValue& v = values_->at(k);
    if (!std::holds_alternative<std::string>(v)) bad(k, "a string");
    return std::get<std::string>(v);
  }

  bool flag(const std::string& k, bool fallback) {
    if (!has(k)) return fallback;
    used_.insert(k);
    const ConfigValue& v = values_->at(k);
    if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
    if (std::holds_alternative<std::string>(v)) {
      const std::string s = std::get<std::string>(v);
      if (s == "on") return true;
      if (s == "off") return false;
    }
    bad(k, "on/off or a boolean");
  }

  Vec3 vec3(const std::string& k, const Vec3& fallback) {
    if (!has(k)) return fallback;
    used_.insert(k);
    const ConfigValue& v = values_->at(k);
    if (!std::holds_alternative<std::vector<double>>(v) || std::get<std::vector<double>>(v).size() != 3) {
      bad(k, "an array of 3 numbers");
    }
    const auto& a = std::get<std::vector<double>>(v);
    return Vec3(a[0], a[1], a[2]);
  }

  const ConfigValue* raw(const std::string& k) {
    if (!has(k)) return nullptr;
    used_.insert(k);
    return &values_->at(k);
  }

  // Numeric keys not yet consumed, for free-form parameter blocks.
  ParamMap rest_as_numbers() {
    ParamMap out;
    if (!values_) return out;
    for (const auto& [k, v] : *values_) {
      if (used_.count(k)) continue;
      if (!std::holds_alternative<double>(v)) bad(k, "a number");
      out[k] = std::get<double>(v);
      used_.insert(k);
    }
    return out;
  }

  void finish() const {
    if (!values_) return;
    for (const auto& [k, v] : *values_) {
      if (!used_.count(k)) {
        throw Error(ErrorKind::ConfigError, "[" + name_ + "]: unknown key '" + k + "'");
      }
    }
  }

  [[noreturn]] void bad(const std::string& k, const std::string& what) const {
    throw Error(ErrorKind::ConfigError, "[" + name_ + "] " + k + ": expected " + what);
  }

 private:
  std::string name_;
  const std::map<std::string, ConfigValue>* values_ = nullptr;
  std::set<std::string> used_;
};

}  // namespace

Scenario Scenario::from_doc(const ConfigDoc& doc) {
  static const std::set<std::string> known = {"vehicle", "gains", "analysis", "trajectory", "sim", "initial"};
  for (const auto& [name, _] : doc.sections) {
    if (!known.count(name)) throw Error(ErrorKind::ConfigError, "unknown section [" + name + "]");
  }
  Scenario sc;

  Section veh(doc, "vehicle");
  sc.vehicle.m = veh.num("m", sc.vehicle.m);
  sc.vehicle.g = veh.num("g", sc.vehicle.g);
  if (const ConfigValue* J = veh.raw("J")) {
    if (!std::holds_alternative<std::vector<double>>(*J)) veh.bad("J", "an array of 3 or 9 numbers");
    const auto& a = std::get<std::vector<double>>(*J);
    if (a.size() == 3) {
      sc.vehicle.J = Vec3(a[0], a[1], a[2]).asDiagonal();
    } else if (a.size() == 9) {
      sc.vehicle.J = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(a.data());
    } else {
      veh.bad("J", "an array of 3 or 9 numbers");
    }
  }
  veh.finish();

  Section g(doc, "gains");
  ControllerGains& c = sc.ctrl;
  c.k_alpha = g.num("k_alpha", c.k_alpha);
  c.alpha_x = g.num("alpha_x", c.alpha_x);
  c.alpha_f = g.num("alpha_f", c.alpha_f);
  c.k_R = g.num("k_R", c.k_R);
  c.k_Omega = g.num("k_Omega", c.k_Omega);
  c.gamma3 = g.num("gamma3", c.gamma3);
  c.gamma4 = g.num("gamma4", c.gamma4);
  c.delta_A = g.num("delta_A", c.delta_A);
  EstimatorGains& e = sc.est;
  e.gamma1 = g.num("gamma1", e.gamma1);
  e.gamma2 = g.num("gamma2", e.gamma2);
  e.gamma21 = g.num("gamma21", e.gamma21);
  e.eps0 = g.num("eps0", e.eps0);
  e.h2 = g.num("h2", e.h2);
  g.finish();

  Section an(doc, "analysis");
  AnalysisSettings& a = sc.analysis;
  a.c1 = an.num("c1", a.c1);
  auto num_or_estimate = [&](const std::string& k, double& out, bool& est) {
    const ConfigValue* v = an.raw(k);
    if (!v) return;
    if (std::holds_alternative<double>(*v)) {
      out = std::get<double>(*v);
    } else if (std::holds_alternative<std::string>(*v) && std::get<std::string>(*v) == "estimate") {
      est = true;
    } else {
      an.bad(k, "a number or \"estimate\"");
    }
  };
  num_or_estimate("L1", a.L1, a.estimate_L1);
  num_or_estimate("rho02", a.rho02, a.estimate_rho02);
  a.rho02_post_transient = an.num("rho02_post_transient", a.rho02_post_transient);
  a.e_alpha_bar = an.num("e_alpha_bar", a.e_alpha_bar);
  const std::string gb = an.str("g1_bound", "projection");
  if (gb == "projection") a.g1_bound = G1Bound::ProjectionBall;
  else if (gb == "as_printed") a.g1_bound = G1Bound::AsPrinted;
  else an.bad("g1_bound", "\"projection\" or \"as_printed\"");
  const std::string ie = an.str("initial_errors", "auto");
  if (ie == "auto") {
    a.auto_initial_errors = true;
  } else if (ie == "given") {
    a.auto_initial_errors = false;
    a.init.e_gx0 = an.num("e_gx0", 0.0);
    a.init.e_xdd0 = an.num("e_xdd0", 0.0);
    a.init.e_gv0 = an.num("e_gv0", 0.0);
    a.init.e_g10 = an.num("e_g10", 0.0);
  } else {
    an.bad("initial_errors", "\"auto\" or \"given\"");
  }
  an.finish();

  Section tr(doc, "trajectory");
  sc.trajectory_kind = tr.str("kind", sc.trajectory_kind);
  sc.trajectory_params = tr.rest_as_numbers();
  tr.finish();

  Section sim(doc, "sim");
  SimSettings& s = sc.sim;
  s.dt = sim.num("dt", s.dt);
  s.duration = sim.num("duration", s.duration);
  s.steady_start = sim.num("steady_start", s.steady_start);
  const std::string rm = sim.str("run_mode", "oracle");
  if (rm == "oracle") s.run_mode = RunMode::Oracle;
  else if (rm == "deployment") s.run_mode = RunMode::Deployment;
  else sim.bad("run_mode", "\"oracle\" or \"deployment\"");
  s.thrust_strategy = parse_thrust_strategy(sim.str("thrust_strategy", "proposed"));
  s.monitors = sim.flag("monitors", s.monitors);
  const std::string rh = sim.str("rc_hold", "foh");
  if (rh == "foh") s.rc_hold = RcHoldMode::FirstOrder;
  else if (rh == "zoh") s.rc_hold = RcHoldMode::ZeroOrder;
  else sim.bad("rc_hold", "\"foh\" or \"zoh\"");
  sim.finish();
  if (!(s.dt > 0.0)) throw Error(ErrorKind::ConfigError, "[sim] dt must be positive");
  if (!(s.duration > s.dt)) throw Error(ErrorKind::ConfigError, "[sim] duration must exceed dt");

  Section ini(doc, "initial");
  if (const ConfigValue* x0 = ini.raw("x0")) {
    if (std::holds_alternative<std::string>(*x0) && std::get<std::string>(*x0) == "reference") {
      sc.initial.x0_at_reference = true;
    } else if (std::holds_alternative<std::vector<double>>(*x0) && std::get<std::vector<double>>(*x0).size() == 3) {
      const auto& v = std::get<std::vector<double>>(*x0);
      sc.initial.x0_at_reference = false;
      sc.initial.x0 = Vec3(v[0], v[1], v[2]);
    } else {
      ini.bad("x0", "\"reference\" or an array of 3 numbers");
    }
  }
  sc.initial.v0 = ini.vec3("v0", sc.initial.v0);
  sc.initial.attitude = ini.vec3("attitude", sc.initial.attitude);
  sc.initial.Omega0 = ini.vec3("Omega0", sc.initial.Omega0);
  ini.finish();

  try {
    sc.vehicle.validate();
    sc.ctrl.validate();
    sc.est.validate();
  } catch (const Error& err) {
    throw Error(ErrorKind::ConfigError, err.what());
  }
  if (!(a.c1 > 0.0) || !(a.e_alpha_bar > 0.0) || (!a.estimate_L1 && !(a.L1 > 0.0)) ||
      (!a.estimate_rho02 && !(a.rho02 > 0.0))) {
    throw Error(ErrorKind::ConfigError, "[analysis] c1, L1, rho02 and e_alpha_bar must be positive");
  }
  // Fail early on bad trajectory parameters.
  sc.make_trajectory();
  return sc;
}

Scenario Scenario::from_file(const std::string& path) { return from_doc(load_config_file(path)); }

std::unique_ptr<Trajectory> Scenario::make_trajectory() const {
  try {
    return builtin(trajectory_kind, trajectory_params);
  } catch (const Error& err) {
    throw Error(ErrorKind::ConfigError, err.what());
  }
}

CertificateInputs Scenario::certificate_inputs(const Trajectory& traj) const {
  CertificateInputs ci;
  ci.vehicle = vehicle;
  ci.ctrl = ctrl;
  ci.est = est;
  ci.traj = traj.bounds();
  ci.c1 = analysis.c1;
  ci.L1 = analysis.L1;
  ci.rho02 = analysis.rho02;
  ci.rho02_post_transient = analysis.rho02_post_transient;
  ci.e_alpha_bar = analysis.e_alpha_bar;
  ci.g1_bound = analysis.g1_bound;
  ci.init = analysis.auto_initial_errors ? initial_filter_errors(traj, est) : analysis.init;
  if (analysis.estimate_L1 || analysis.estimate_rho02) {
    const OmegaCFit fit = estimate_omega_c_bound(ci);
    if (analysis.estimate_L1) ci.L1 = fit.L1;
    if (analysis.estimate_rho02) ci.rho02 = fit.rho02;
  }
  if (ci.rho02_post_transient < 0.0) ci.rho02_post_transient = ci.rho02;
  return ci;
}

std::string to_string(RunMode m) { return m == RunMode::Oracle ? "oracle" : "deployment"; }

}  // namespace geotrack
