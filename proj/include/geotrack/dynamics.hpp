#pragma once

#include <vector>

#include <Eigen/Dense>

#include "geotrack/so3.hpp"

namespace geotrack {

struct MixerConfig {
  // Row 0 maps squared rotor speeds to thrust, rows 1..3 to body moments.
  Eigen::MatrixXd gamma;

  int rotor_count() const { return static_cast<int>(gamma.cols()); }

  // Unit-coefficient quad-X layout.
  static MixerConfig quad_x();
};

struct VehicleParams {
  double m = 1.0;
  Mat3 J = Vec3(0.02, 0.02, 0.04).asDiagonal();
  double g = 9.81;
  MixerConfig mixer = MixerConfig::quad_x();

  // Throws Error(BadParams) on m <= 0, g <= 0, asymmetric or indefinite J.
  void validate() const;
  double lambda_min_J() const;
  double lambda_max_J() const;
};

struct MultirotorState {
  Vec3 x = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 Omega = Vec3::Zero();
};

struct ControlInput {
  double f = 0.0;
  Vec3 M = Vec3::Zero();
};

struct StateDerivative {
  Vec3 x_dot;
  Vec3 v_dot;
  Mat3 R_dot;  // R hat(Omega)
  Vec3 Omega_dot;
};

StateDerivative state_derivative(const MultirotorState& s, const ControlInput& u,
                                 const VehicleParams& p);

// One step of length dt with the input held constant. Translational and rate
// states use classical RK4; the attitude uses RK4 in exponential coordinates
// (Munthe-Kaas) so the update is R * exp(theta) and stays on SO(3).
MultirotorState step(const MultirotorState& s, const ControlInput& u, const VehicleParams& p,
                     double dt);

struct RotorAllocation {
  Eigen::VectorXd speed_sq;  // squared rotor speeds, length n
  bool saturated = false;    // some component came out negative
};

// Minimum-norm solution of gamma * w = [f, M].
RotorAllocation allocate_rotors(const ControlInput& u, const MixerConfig& mix);

}  // namespace geotrack
