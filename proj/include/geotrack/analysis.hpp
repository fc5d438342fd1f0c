#pragma once

#include <array>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "geotrack/controller.hpp"
#include "geotrack/dynamics.hpp"
#include "geotrack/estimator.hpp"
#include "geotrack/trajectory.hpp"

namespace geotrack {

// Which bound on ||g1|| enters alpha1, alpha2 and the thrust-direction
// condition. The projection only guarantees h2*sqrt(1+eps0); the proof text
// uses h2.
enum class G1Bound { ProjectionBall, AsPrinted };

struct InitialFilterErrors {
  double e_gx0 = 0.0;   // ||x_d'(0) - g_xd(0)||
  double e_xdd0 = 0.0;  // ||x_d''(0) - d/dt g_xd(0)||
  double e_gv0 = 0.0;   // ||d/dt g_xd(0) - g_vd(0)||
  double e_g10 = 0.0;   // ||x_d''(0) - g1(0)||
};

// Errors of a freshly started estimator against the trajectory at t = 0.
InitialFilterErrors initial_filter_errors(const Trajectory& traj, const EstimatorGains& gains);

struct CertificateInputs {
  VehicleParams vehicle;
  ControllerGains ctrl;
  EstimatorGains est;
  TrajectoryBounds traj;
  double c1 = 0.05;
  double L1 = 1.0;
  double rho02 = 1.0;               // Omega_c offset over the whole run, start-up included
  double rho02_post_transient = 1.0;  // same offset once the filters have settled
  double e_alpha_bar = 10.0;
  InitialFilterErrors init;
  G1Bound g1_bound = G1Bound::ProjectionBall;
  double V0 = 0.0;  // V(0), for the e_alpha_bar consistency check
};

struct Condition {
  std::string id;
  std::string statement;
  double margin = 0.0;  // > 0 means satisfied
  bool pass = false;
};

struct CertificateReport {
  std::array<double, 8> alpha{};   // alpha[1..7]
  double rho03 = 0.0;
  std::array<double, 8> lambda{};  // lambda[1..7]
  double lambda_V = 0.0;
  double D = 0.0;
  double ultimate_bound = 0.0;      // D / lambda_V
  // Same quantities with every initial filter error set to zero and
  // rho02_post_transient in place of rho02, i.e. what the bound becomes once
  // the filter start-up transient has decayed.
  double D_post_transient = 0.0;
  std::array<double, 8> alpha_post_transient{};  // filter bounds alpha[3..7] without initial errors
  double ultimate_bound_post_transient = 0.0;
  double lambda_bar1 = 0.0, lambda_bar2 = 0.0, beta_bar = 0.0;
  double roa_psi0_max = 2.0;
  double roa_eomega_coeff = 0.0;    // ||e_Omega(0)||^2 < coeff * (2 - Psi(0))
  double t_transient = 0.0;
  std::vector<Condition> conditions;

  bool all_pass() const;
  std::vector<std::string> failing() const;
  std::string to_table() const;
  std::string to_key_value() const;
};

CertificateReport compute_constants(const CertificateInputs& ci);

// 25 of the slowest estimator time constants. The cascaded filters leave
// polynomial-times-exponential tails, (t/gamma)^2 e^(-t/gamma), which are
// below 1e-8 of the initial errors by then.
double filter_transient_time(const EstimatorGains& gains);

struct LyapunovInputs {
  MultirotorState s;
  AttitudeFilterState afs;
  PositionLoopState pls;
  Mat3 R_c = Mat3::Identity();
  Vec3 x_d = Vec3::Zero();
  Vec3 x_d_dot = Vec3::Zero();  // true derivative; the functions are stated in true errors
};

struct LyapunovValues {
  double V2 = 0.0, V3 = 0.0, V4 = 0.0, V = 0.0;
  double e_norm_sq = 0.0;
};

LyapunovValues lyapunov_eval(const LyapunovInputs& in, const VehicleParams& p, const ControllerGains& gains,
                             double c1);

// V2 = 1/2 e_Omega^T J e_Omega + k_R Psi + c1 e_Omega^T e_R for the attitude loop alone.
double lyapunov_v2(const Mat3& R, const Vec3& Omega, const AttitudeFilterState& afs, const Mat3& J, double k_R,
                   double c1);

// log(R_c(t)^T R_c(t+dt)) / dt
Vec3 omega_c_diagnostic(const Mat3& R_c_prev, const Mat3& R_c_next, double dt);

struct OmegaCFit {
  double L1 = 0.0;
  double rho02 = 0.0;
  int samples = 0;
};

// Samples the closed-loop expression for Omega_c over random errors with
// ||e_alpha|| <= e_alpha_bar and fits ||Omega_c|| <= L1 ||e_alpha|| + rho02 as
// an upper envelope. Deterministic for a fixed seed.
OmegaCFit estimate_omega_c_bound(const CertificateInputs& ci, int samples = 20000, unsigned seed = 7);

// Everything a monitor needs from one control step.
struct MonitorSample {
  double t = 0.0;
  Vec3 f_d = Vec3::Zero();
  double f = 0.0;
  Mat3 R = Mat3::Identity();
  Vec3 e_Rdc = Vec3::Zero();
  Vec3 e_Rd = Vec3::Zero();
  double psi_R_Rd = 0.0;
  double psi_Rd_Rc = 0.0;
  Vec3 g1 = Vec3::Zero();
  Vec3 g_xd = Vec3::Zero();
  Vec3 g_vd = Vec3::Zero();
  Vec3 g1_correction = Vec3::Zero();  // projection term removed from phi
  bool projection_active = false;
  OracleDerivatives oracle;
  double V = 0.0;
  double e_norm_sq = 0.0;
  double e_alpha_norm = 0.0;
  bool has_omega_c = false;
  Vec3 omega_c = Vec3::Zero();
};

struct CheckStats {
  double min_slack = std::numeric_limits<double>::infinity();
  double t_min = 0.0;
  long evaluations = 0;
  long violations = 0;
};

class Monitor {
 public:
  static constexpr double kTolerance = 1e-6;
  static constexpr double kDecreaseMargin = 0.05;

  Monitor(const CertificateInputs& ci, const CertificateReport& rep, double dt);

  // Returns the number of new violations recorded by this sample.
  long observe(const MonitorSample& m);
  const std::map<std::string, CheckStats>& stats() const { return stats_; }
  long total_violations() const;
  std::string report() const;

  // Ids of the Lemma checks used by the lemma audit.
  static std::vector<std::string> lemma_ids();

 private:
  void record(const std::string& id, double slack, double t, long& fresh);

  CertificateInputs ci_;
  CertificateReport rep_;
  double dt_;
  double ball_sq_;  // squared radius of the projection ball
  std::map<std::string, CheckStats> stats_;
  // V history for central differences
  int nv_ = 0;
  double V_[3]{};
  double e_sq_[3]{};
  double t_[3]{};
};

struct IsolationResult {
  double max_psi = 0.0;
  double slope = 0.0;       // least-squares slope of log V2 over the window
  double beta_bar = 0.0;
  double window_start = 0.0, window_end = 0.0;
  int window_points = 0;
  bool in_region = false;
  bool psi_stayed_below_2 = false;
};

// Attitude loop only: constant R_d, Omega_d = 0, the moment law driving the plant.
IsolationResult run_attitude_isolation(const CertificateInputs& ci, const Mat3& R_d, const Mat3& R0,
                                       const Vec3& Omega0, double dt, double duration);

}  // namespace geotrack
