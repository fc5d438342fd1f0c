#pragma once

#include <string>

#include "geotrack/dynamics.hpp"
#include "geotrack/so3.hpp"

namespace geotrack {

struct ControllerGains {
  double k_alpha = 1.0;
  double alpha_x = 0.5;
  double alpha_f = 1.0;
  double k_R = 10.0;
  double k_Omega = 2.0;
  double gamma3 = 0.05;
  double gamma4 = 0.05;
  double delta_A = 0.1;  // lower bound on ||x_Bd x z_Bc||

  void validate() const;
};

struct PositionLoopState {
  Vec3 e_f = Vec3::Zero();
};

struct AttitudeFilterState {
  Mat3 R_d = Mat3::Identity();
  Vec3 Omega_d = Vec3::Zero();
};

enum class ThrustStrategy { Lee2010, KarMagnitude, ProposedHalfAngle };

ThrustStrategy parse_thrust_strategy(const std::string& name);
std::string to_string(ThrustStrategy s);

inline constexpr double kEfAbortLimit = 50.0;

struct PositionErrors {
  Vec3 e_x;
  Vec3 e_alpha;
};

// v_d_used is the true x_d' (oracle mode) or the estimator's g_xd (deployment).
PositionErrors position_errors(const MultirotorState& s, const Vec3& x_d, const Vec3& v_d_used,
                               const PositionLoopState& pls, const ControllerGains& gains);

// de_f/dt, with Cosh^2(e_f) tanh(e_f) expanded to cosh*sinh so nothing is
// divided back out of an overflowing cosh^2.
Vec3 ef_rate(const Vec3& e_f, const Vec3& e_alpha, const Vec3& e_x, const ControllerGains& gains);

// RK4 over one step with v - v_d and e_x held. e_alpha is rebuilt at every
// stage from the stage's e_f. Throws Error(NonFinite) if |e_f| passes kEfAbortLimit.
PositionLoopState ef_advance(const PositionLoopState& pls, const Vec3& e_alpha, const Vec3& e_x,
                             const ControllerGains& gains, double dt);

Vec3 virtual_input(const Vec3& e_x, const Vec3& e_f, const Vec3& g1, const VehicleParams& p,
                   const ControllerGains& gains);

// Throws ZeroThrustDirection for f_d = 0, HeadingSingular when ||x_Bd x z|| < delta_A.
Mat3 desired_attitude(const Vec3& f_d, const Vec3& x_Bd, const ControllerGains& gains);

double thrust(const Vec3& f_d, const Mat3& R_c, const Mat3& R, ThrustStrategy strategy);

// Right-hand side of the auxiliary attitude filter for the rate.
Vec3 attitude_filter_accel(const Mat3& R_d, const Vec3& Omega_d, const Mat3& R_c, const ControllerGains& gains);

// R_c over the step is R_c * exp(tau * omega), tau in [0, dt]. omega = 0 is a
// zero-order hold; a first-order hold extrapolates the last observed rate.
struct RcHold {
  Mat3 R_c = Mat3::Identity();
  Vec3 omega = Vec3::Zero();
};

struct AttitudeFilterStep {
  AttitudeFilterState state;
  Vec3 Omega_d_dot = Vec3::Zero();  // (Omega_d(t+dt) - Omega_d(t)) / dt
  int substeps = 1;
  bool implicit = false;
};

// Largest eigenvalue magnitude of the filter linearised at its equilibrium.
double attitude_filter_stiffness(const ControllerGains& gains);

// Explicit RK4 (exponential coordinates on R_d) when the filter is mildly stiff,
// otherwise backward Euler on the group with Newton iterations.
AttitudeFilterStep attitude_filter_advance(const AttitudeFilterState& afs, const RcHold& rc,
                                           const ControllerGains& gains, double dt);

Vec3 moment(const MultirotorState& s, const AttitudeFilterState& afs, const Vec3& Omega_d_dot,
            const VehicleParams& p, const ControllerGains& gains);

}  // namespace geotrack
