#pragma once

#include "geotrack/so3.hpp"

namespace geotrack {

struct EstimatorGains {
  double gamma1 = 0.05;
  double gamma2 = 0.05;
  double gamma21 = 0.05;
  double eps0 = 0.1;
  double h2 = 1.0;  // assumed bound on ||x_d''||

  void validate() const;
  // Radius of the ball the projection keeps g1 inside.
  double g1_radius() const;
};

struct EstimatorState {
  Vec3 x_fd = Vec3::Zero();
  Vec3 g_fd = Vec3::Zero();
  Vec3 g1 = Vec3::Zero();
  Vec3 x_d0 = Vec3::Zero();
  Vec3 g_xd0 = Vec3::Zero();  // zero by construction once x_d0 is latched
  Vec3 x_d_prev = Vec3::Zero();   // x_d one sample back
  Vec3 x_d_prev2 = Vec3::Zero();  // two samples back
  Vec3 x_d_prev3 = Vec3::Zero();  // three samples back
  int history = 0;                // consecutive equally spaced samples held, up to 3
  double dt_prev = 0.0;
  double t = 0.0;
  bool started = false;
};

struct EstimatorOutput {
  Vec3 g_xd = Vec3::Zero();  // estimate of x_d'
  Vec3 g_vd = Vec3::Zero();  // estimate of x_d'' (unbounded)
  Vec3 g1 = Vec3::Zero();    // projected estimate of x_d''
  Vec3 phi = Vec3::Zero();   // nominal g1 rate before projection
  bool projection_active = false;
};

struct EstimatorStep {
  EstimatorState state;
  EstimatorOutput out;
};

// Projected rate for g1. The radial part of phi is removed in proportion to
// how far g1 sits inside the tolerance shell; `active` reports the branch.
Vec3 projection_rate(const Vec3& g1, const Vec3& phi, const EstimatorGains& gains, bool* active = nullptr);

// Outputs at the state's current time for the input x_d sampled at that time.
EstimatorOutput estimator_outputs(const EstimatorState& st, const EstimatorGains& gains, const Vec3& x_d);

// First call latches x_d(0) and returns the t = 0 outputs without advancing.
// Later calls integrate the filters over [t, t + dt] and return outputs at
// t + dt. Inside the step x_d is interpolated by the cubic through the last four
// equally spaced samples, or linearly until four are available.
EstimatorStep estimator_advance(const EstimatorState& st, const EstimatorGains& gains, const Vec3& x_d, double dt);

}  // namespace geotrack
