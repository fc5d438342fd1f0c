#include "geotrack/dynamics.hpp"

#include <cmath>

#include "geotrack/errors.hpp"

namespace geotrack {

MixerConfig MixerConfig::quad_x() {
  MixerConfig mc;
  mc.gamma.resize(4, 4);
  mc.gamma << 1, 1, 1, 1,
              -1, 1, 1, -1,
              1, 1, -1, -1,
              1, -1, 1, -1;
  return mc;
}

void VehicleParams::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorKind::BadParams, "mass must be positive");
  if (!(g > 0.0) || !std::isfinite(g)) throw Error(ErrorKind::BadParams, "gravity must be positive");
  if (!J.allFinite() || (J - J.transpose()).norm() > 1e-12) {
    throw Error(ErrorKind::BadParams, "inertia must be symmetric");
  }
  if (!(lambda_min_J() > 0.0)) throw Error(ErrorKind::BadParams, "inertia must be positive definite");
  if (mixer.gamma.rows() != 4 || mixer.gamma.cols() < 4) {
    throw Error(ErrorKind::BadParams, "mixer must be 4 x n with n >= 4");
  }
}

double VehicleParams::lambda_min_J() const {
  return Eigen::SelfAdjointEigenSolver<Mat3>(J, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

double VehicleParams::lambda_max_J() const {
  return Eigen::SelfAdjointEigenSolver<Mat3>(J, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

namespace {

Vec3 translational_accel(const Mat3& R, double f, const VehicleParams& p) {
  return p.g * e3() - (f / p.m) * (R * e3());
}

Vec3 angular_accel(const Vec3& Omega, const Vec3& M, const VehicleParams& p) {
  return p.J.ldlt().solve(-Omega.cross(p.J * Omega) + M);
}

void require_finite(const MultirotorState& s) {
  if (!s.x.allFinite() || !s.v.allFinite() || !s.R.allFinite() || !s.Omega.allFinite()) {
    throw Error(ErrorKind::NonFinite, "plant state is not finite");
  }
}

}  // namespace

StateDerivative state_derivative(const MultirotorState& s, const ControlInput& u,
                                 const VehicleParams& p) {
  StateDerivative d;
  d.x_dot = s.v;
  d.v_dot = translational_accel(s.R, u.f, p);
  d.R_dot = s.R * so3::hat(s.Omega);
  d.Omega_dot = angular_accel(s.Omega, u.M, p);
  if (!d.v_dot.allFinite() || !d.Omega_dot.allFinite() || !d.R_dot.allFinite()) {
    throw Error(ErrorKind::NonFinite, "state derivative is not finite");
  }
  return d;
}

MultirotorState step(const MultirotorState& s, const ControlInput& u, const VehicleParams& p,
                     double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::BadParams, "dt must be positive");

  // Stage i sees R_i = R exp(theta_i); k* are the stage slopes.
  auto stage = [&](const Vec3& v, const Vec3& Om, const Vec3& theta, Vec3& kx, Vec3& kv,
                   Vec3& kth, Vec3& kOm) {
    const Mat3 Ri = s.R * so3::exp(theta);
    kx = v;
    kv = translational_accel(Ri, u.f, p);
    kth = so3::dexp_inv(theta, Om);
    kOm = angular_accel(Om, u.M, p);
  };

  Vec3 kx1, kv1, kt1, ko1, kx2, kv2, kt2, ko2, kx3, kv3, kt3, ko3, kx4, kv4, kt4, ko4;
  const double h = 0.5 * dt;
  stage(s.v, s.Omega, Vec3::Zero(), kx1, kv1, kt1, ko1);
  stage(s.v + h * kv1, s.Omega + h * ko1, h * kt1, kx2, kv2, kt2, ko2);
  stage(s.v + h * kv2, s.Omega + h * ko2, h * kt2, kx3, kv3, kt3, ko3);
  stage(s.v + dt * kv3, s.Omega + dt * ko3, dt * kt3, kx4, kv4, kt4, ko4);

  MultirotorState out;
  out.x = s.x + dt / 6.0 * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4);
  out.v = s.v + dt / 6.0 * (kv1 + 2.0 * kv2 + 2.0 * kv3 + kv4);
  out.Omega = s.Omega + dt / 6.0 * (ko1 + 2.0 * ko2 + 2.0 * ko3 + ko4);
  out.R = s.R * so3::exp(dt / 6.0 * (kt1 + 2.0 * kt2 + 2.0 * kt3 + kt4));
  if (so3::orthogonality_residual(out.R) > 1e-12) out.R = so3::project(out.R);
  require_finite(out);
  return out;
}

RotorAllocation allocate_rotors(const ControlInput& u, const MixerConfig& mix) {
  const Eigen::MatrixXd& G = mix.gamma;
  if (G.rows() != 4) throw Error(ErrorKind::BadParams, "mixer must have 4 rows");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || sv(0) / smin > 1e12) {
    throw Error(ErrorKind::RankDeficient, "mixer is rank deficient");
  }
  Eigen::Vector4d w;
  w << u.f, u.M;
  RotorAllocation out;
  out.speed_sq = svd.matrixV() * (sv.cwiseInverse().asDiagonal() * (svd.matrixU().transpose() * w));
  out.saturated = (out.speed_sq.array() < 0.0).any();
  return out;
}

}  // namespace geotrack
