#include "geotrack/so3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geotrack/errors.hpp"

namespace geotrack {
namespace so3 {

Mat3 hat(const Vec3& v) {
  Mat3 S;
  S << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return S;
}

Vec3 vee(const Mat3& S) {
  if ((S + S.transpose()).norm() >= kSkewTol) {
    throw Error(ErrorKind::NotSkew, "matrix is not skew-symmetric");
  }
  return Vec3(S(2, 1), S(0, 2), S(1, 0));
}

Mat3 exp(const Vec3& v) {
  const double theta = v.norm();
  const Mat3 K = hat(v);
  if (theta < 1e-8) {
    // 4th-order series: I + K + K^2/2 + K^3/6 + K^4/24
    const Mat3 K2 = K * K;
    return Mat3::Identity() + K + 0.5 * K2 + (K2 * K) / 6.0 + (K2 * K2) / 24.0;
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Mat3::Identity() + a * K + b * (K * K);
}

Vec3 log(const Mat3& R) {
  const double c = std::clamp(0.5 * (R.trace() - 1.0), -1.0, 1.0);
  const double theta = std::acos(c);
  const Vec3 w(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  if (theta < 1e-8) {
    return 0.5 * w;
  }
  if (std::numbers::pi - theta < 1e-6) {
    // Near pi the skew part vanishes; recover the axis from the symmetric part.
    const Mat3 B = 0.5 * (R + Mat3::Identity());
    Eigen::Index k = 0;
    B.diagonal().maxCoeff(&k);
    Vec3 axis = B.col(k) / std::sqrt(std::max(B(k, k), 1e-300));
    axis.normalize();
    if (axis.dot(w) < 0.0) axis = -axis;
    return theta * axis;
  }
  return theta / (2.0 * std::sin(theta)) * w;
}

Mat3 project(const Mat3& M) {
  Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 U = svd.matrixU();
  const Mat3 V = svd.matrixV();
  if ((U * V.transpose()).determinant() < 0.0) {
    U.col(2) = -U.col(2);
  }
  return U * V.transpose();
}

double orthogonality_residual(const Mat3& R) {
  return (R.transpose() * R - Mat3::Identity()).norm();
}

bool is_rotation(const Mat3& R, double tol) {
  return R.allFinite() && orthogonality_residual(R) < tol &&
         (R * R.transpose() - Mat3::Identity()).norm() < tol &&
         std::abs(R.determinant() - 1.0) < tol;
}

Vec3 dexp_inv(const Vec3& theta, const Vec3& omega) {
  const Vec3 c1 = theta.cross(omega);
  return omega + 0.5 * c1 + theta.cross(c1) / 12.0;
}

namespace {

double antipodal_root(const Mat3& R2, const Mat3& R1) {
  const double s = 1.0 + (R1.transpose() * R2).trace();
  if (!(s > kAntipodalEps)) {
    throw Error(ErrorKind::NearAntipodal, "attitudes are within the antipodal guard band");
  }
  return std::sqrt(s);
}

}  // namespace

AttitudeError config_error(const Mat3& R2, const Mat3& R1) {
  const double root = antipodal_root(R2, R1);
  const Mat3 Q = R1.transpose() * R2;
  const Mat3 S = Q - Q.transpose();
  AttitudeError out;
  out.psi = 2.0 - root;
  out.e_R = Vec3(S(2, 1), S(0, 2), S(1, 0)) / (2.0 * root);
  return out;
}

Vec3 angular_velocity_error(const Mat3& R2, const Vec3& Omega2, const Mat3& R1,
                            const Vec3& Omega1) {
  return Omega2 - R2.transpose() * (R1 * Omega1);
}

Mat3 e_matrix(const Mat3& R2, const Mat3& R1) {
  const double root = antipodal_root(R2, R1);
  const Mat3 P = R2.transpose() * R1;
  const Mat3 S = P.transpose() - P;
  const Vec3 eR = Vec3(S(2, 1), S(0, 2), S(1, 0)) / (2.0 * root);
  return (P.trace() * Mat3::Identity() - P + 2.0 * eR * eR.transpose()) / (2.0 * root);
}

}  // namespace so3

double sech2(double x) {
  const double ax = std::abs(x);
  const double e = std::exp(-2.0 * ax);
  if (ax >= 30.0) {
    return 4.0 * e;  // (1 + e)^2 == 1 to double precision here
  }
  const double d = 1.0 + e;
  return 4.0 * e / (d * d);
}

Vec3 tanh_vec(const Vec3& v) {
  return Vec3(std::tanh(v.x()), std::tanh(v.y()), std::tanh(v.z()));
}

SaturationMaps saturation_maps(const Vec3& v) {
  SaturationMaps out;
  out.tanh_vec = tanh_vec(v);
  for (int i = 0; i < 3; ++i) {
    out.sech2[i] = sech2(v[i]);
    out.cosh2[i] = 1.0 / out.sech2[i];
  }
  return out;
}

}  // namespace geotrack
