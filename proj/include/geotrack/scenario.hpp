#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "geotrack/analysis.hpp"
#include "geotrack/controller.hpp"
#include "geotrack/dynamics.hpp"
#include "geotrack/estimator.hpp"
#include "geotrack/trajectory.hpp"

namespace geotrack {

// Flat TOML subset: [section] headers, key = value, # comments. Values are
// numbers, "strings", true/false, or flat arrays of numbers.
using ConfigValue = std::variant<double, std::string, bool, std::vector<double>>;

struct ConfigDoc {
  std::map<std::string, std::map<std::string, ConfigValue>> sections;
};

// Throws Error(ConfigError) with a line number on malformed input.
ConfigDoc parse_config(const std::string& text);
ConfigDoc load_config_file(const std::string& path);

enum class RunMode { Oracle, Deployment };
enum class RcHoldMode { FirstOrder, ZeroOrder };

struct SimSettings {
  double dt = 1e-3;
  double duration = 10.0;
  RunMode run_mode = RunMode::Oracle;
  ThrustStrategy thrust_strategy = ThrustStrategy::ProposedHalfAngle;
  bool monitors = true;
  RcHoldMode rc_hold = RcHoldMode::FirstOrder;
  double steady_start = -1.0;  // start of the steady-state window; < 0 means duration / 2
};

struct InitialConditions {
  bool x0_at_reference = true;  // x(0) = x_d(0)
  Vec3 x0 = Vec3::Zero();
  Vec3 v0 = Vec3::Zero();
  Vec3 attitude = Vec3::Zero();  // axis-angle, rad
  Vec3 Omega0 = Vec3::Zero();
};

struct AnalysisSettings {
  double c1 = 0.05;
  double L1 = 1.0;
  double rho02 = 1.0;
  double rho02_post_transient = -1.0;  // < 0: same as rho02
  bool estimate_L1 = false;
  bool estimate_rho02 = false;
  double e_alpha_bar = 10.0;
  G1Bound g1_bound = G1Bound::ProjectionBall;
  bool auto_initial_errors = true;
  InitialFilterErrors init;
};

struct Scenario {
  VehicleParams vehicle;
  ControllerGains ctrl;
  EstimatorGains est;
  AnalysisSettings analysis;
  std::string trajectory_kind = "hover";
  ParamMap trajectory_params;
  SimSettings sim;
  InitialConditions initial;

  static Scenario from_doc(const ConfigDoc& doc);
  static Scenario from_file(const std::string& path);

  std::unique_ptr<Trajectory> make_trajectory() const;

  // Certificate inputs with initial filter errors and L1/rho02 resolved.
  // V0 is left at zero; Simulation fills it in from the actual start state.
  CertificateInputs certificate_inputs(const Trajectory& traj) const;
};

std::string to_string(RunMode m);

}  // namespace geotrack
