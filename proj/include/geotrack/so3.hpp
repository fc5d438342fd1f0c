#pragma once

#include <Eigen/Dense>

namespace geotrack {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline Vec3 e3() { return Vec3::UnitZ(); }

namespace so3 {

/// 1 + tr(R1^T R2) must exceed this for the attitude error maps to be evaluated.
inline constexpr double kAntipodalEps = 1e-8;

/// Tolerance used by vee() to accept a matrix as skew-symmetric.
inline constexpr double kSkewTol = 1e-9;

Mat3 hat(const Vec3& v);

/// Inverse of hat(). Throws Error(NotSkew) when ||S + S^T|| >= kSkewTol.
Vec3 vee(const Mat3& S);

/// Rodrigues' formula; a Taylor expansion takes over for ||v|| < 1e-8.
Mat3 exp(const Vec3& v);

/// Principal logarithm, returning the rotation vector with angle in [0, pi].
Vec3 log(const Mat3& R);

/// Nearest rotation in the Frobenius sense (polar decomposition via SVD).
Mat3 project(const Mat3& M);

/// ||R^T R - I||_F
double orthogonality_residual(const Mat3& R);

bool is_rotation(const Mat3& R, double tol = 1e-9);

/// For R(t) = R0 exp(theta(t)) with dR/dt = R hat(omega), returns dtheta/dt
/// truncated after the double bracket. Enough for fourth-order Munthe-Kaas stages.
Vec3 dexp_inv(const Vec3& theta, const Vec3& omega);

struct AttitudeError {
  double psi = 0.0;
  Vec3 e_R = Vec3::Zero();
};

/// Configuration error psi(R2, R1) = 2 - sqrt(1 + tr(R1^T R2)) and the matching
/// error vector e_R. R2 is the current attitude, R1 the reference.
/// Throws Error(NearAntipodal) when 1 + tr(R1^T R2) <= kAntipodalEps.
AttitudeError config_error(const Mat3& R2, const Mat3& R1);

/// e_Omega = Omega2 - R2^T R1 Omega1
Vec3 angular_velocity_error(const Mat3& R2, const Vec3& Omega2, const Mat3& R1,
                            const Vec3& Omega1);

/// Matrix E(R2, R1) with d/dt e_R = E e_Omega. Its spectral norm is 1/2.
Mat3 e_matrix(const Mat3& R2, const Mat3& R1);

}  // namespace so3

/// Componentwise tanh together with the diagonals of Cosh^2 and Sech^2.
struct SaturationMaps {
  Vec3 tanh_vec;
  Vec3 cosh2;
  Vec3 sech2;

  Eigen::DiagonalMatrix<double, 3> cosh2_diag() const { return cosh2.asDiagonal(); }
  Eigen::DiagonalMatrix<double, 3> sech2_diag() const { return sech2.asDiagonal(); }
};

/// sech^2 without forming cosh^2; exact for every finite argument and
/// underflows smoothly to 0 for large |x|.
double sech2(double x);

SaturationMaps saturation_maps(const Vec3& v);

Vec3 tanh_vec(const Vec3& v);

}  // namespace geotrack
