#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "geotrack/errors.hpp"
#include "geotrack/so3.hpp"

using namespace geotrack;

namespace {

Mat3 rz(double a) {
  Mat3 R;
  R << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return R;
}

Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

Mat3 random_rotation(std::mt19937_64& rng) {
  // Uniform over SO(3) through a random unit quaternion.
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

}  // namespace

TEST_CASE("hat builds the cross-product matrix") {
  CHECK(so3::hat(Vec3::Zero()).isZero(0.0));
  Mat3 expect_e3;
  expect_e3 << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  CHECK(so3::hat(e3()).isApprox(expect_e3));
  Mat3 expect;
  expect << 0, -3, 2, 3, 0, -1, -2, 1, 0;
  const Vec3 v(1, 2, 3);
  CHECK((so3::hat(v) - expect).norm() == 0.0);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const Vec3 w = random_vec(rng, 5.0);
    CHECK((so3::hat(v) * w - v.cross(w)).norm() < 1e-12);
  }
}

TEST_CASE("vee inverts hat and rejects non-skew input") {
  CHECK(so3::vee(Mat3::Zero()).isZero(0.0));
  CHECK(so3::vee(so3::hat(Vec3(1, 2, 3))) == Vec3(1, 2, 3));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 r = random_vec(rng, 10.0);
    CHECK((so3::vee(so3::hat(r)) - r).norm() < 1e-15);
  }
  Mat3 S = so3::hat(Vec3(1, 2, 3));
  S(0, 0) = 1e-3;
  try {
    so3::vee(S);
    FAIL("expected NotSkew");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSkew);
  }
}

TEST_CASE("exp matches Rodrigues by hand and respects the group inverse") {
  CHECK(so3::exp(Vec3::Zero()).isApprox(Mat3::Identity()));
  Mat3 expect;
  expect << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK((so3::exp(Vec3(0, 0, std::numbers::pi / 2)) - expect).norm() < 1e-15);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Vec3 v = random_vec(rng, 3.0);
    CHECK((so3::exp(v) * so3::exp(-v) - Mat3::Identity()).norm() < 1e-12);
    CHECK(so3::orthogonality_residual(so3::exp(v)) < 1e-14);
  }
  // Small-angle branch agrees with the closed form just above the switch.
  const Vec3 tiny(3e-9, -2e-9, 1e-9);
  CHECK((so3::exp(tiny) - (Mat3::Identity() + so3::hat(tiny))).norm() < 1e-16);
}

TEST_CASE("log is the inverse of exp including angles near pi") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 500; ++i) {
    Vec3 v = random_vec(rng, 1.0);
    v = v.normalized() * std::uniform_real_distribution<double>(0.0, std::numbers::pi - 1e-6)(rng);
    CHECK((so3::log(so3::exp(v)) - v).norm() < 1e-9);
  }
  const Vec3 axis = Vec3(1, 2, -2).normalized();
  const Vec3 near_pi = (std::numbers::pi - 1e-7) * axis;
  CHECK((so3::log(so3::exp(near_pi)) - near_pi).norm() < 1e-6);
  CHECK(std::abs(so3::log(so3::exp(std::numbers::pi * axis)).norm() - std::numbers::pi) < 1e-12);
}

TEST_CASE("project returns the nearest rotation") {
  std::mt19937_64 rng(5);
  const Mat3 R = random_rotation(rng);
  Mat3 noisy = R;
  noisy(0, 1) += 1e-6;
  const Mat3 P = so3::project(noisy);
  CHECK(so3::is_rotation(P, 1e-14));
  CHECK((P - R).norm() < 2e-6);
  CHECK((so3::project(R) - R).norm() < 1e-14);
}

TEST_CASE("configuration error at the identity and a quarter turn") {
  const so3::AttitudeError zero = so3::config_error(Mat3::Identity(), Mat3::Identity());
  CHECK(zero.psi == 0.0);
  CHECK(zero.e_R.isZero(0.0));

  const so3::AttitudeError q = so3::config_error(rz(std::numbers::pi / 2), Mat3::Identity());
  CHECK(q.psi == doctest::Approx(0.585786437626905).epsilon(1e-14));
  CHECK(q.e_R.x() == doctest::Approx(0.0));
  CHECK(q.e_R.y() == doctest::Approx(0.0));
  CHECK(q.e_R.z() == doctest::Approx(0.707106781186548).epsilon(1e-14));

  const so3::AttitudeError near = so3::config_error(rz(std::numbers::pi - 1e-3), Mat3::Identity());
  CHECK(near.psi < 2.0);
  CHECK(near.psi > 2.0 - 1e-3);
  CHECK(near.e_R.norm() < 1.0);
  CHECK(std::abs(near.e_R.norm() - std::sin((std::numbers::pi - 1e-3) / 2)) < 1e-9);
}

TEST_CASE("configuration error refuses antipodal attitudes") {
  try {
    so3::config_error(rz(std::numbers::pi), Mat3::Identity());
    FAIL("expected NearAntipodal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NearAntipodal);
  }
}

TEST_CASE("sandwich and half-angle properties over random pairs") {
  std::mt19937_64 rng(6);
  int tested = 0;
  for (int i = 0; i < 2000; ++i) {
    const Mat3 R1 = random_rotation(rng), R2 = random_rotation(rng);
    const double angle = so3::log(R1.transpose() * R2).norm();
    // 1 + tr = 4 cos^2(angle / 2), evaluated independently of config_error; skip the guard band.
    if (4.0 * std::pow(std::cos(angle / 2.0), 2) <= so3::kAntipodalEps) continue;
    const so3::AttitudeError a = so3::config_error(R2, R1);
    ++tested;
    const double n2 = a.e_R.squaredNorm();
    CHECK(n2 <= a.psi + 1e-12);
    CHECK(a.psi <= 2.0 * n2 + 1e-12);
    CHECK(std::abs(a.e_R.norm() - std::sin(angle / 2.0)) < 1e-9);
  }
  CHECK(tested > 1900);
}

TEST_CASE("angular velocity error") {
  const Vec3 w(0.3, -1.0, 2.0);
  CHECK(so3::angular_velocity_error(Mat3::Identity(), w, Mat3::Identity(), w).isZero(0.0));
  CHECK(so3::angular_velocity_error(Mat3::Identity(), Vec3(1, 0, 0), Mat3::Identity(), Vec3::Zero()) ==
        Vec3(1, 0, 0));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Mat3 R1 = random_rotation(rng), R2 = random_rotation(rng);
    const Vec3 O1 = random_vec(rng, 3.0), O2 = random_vec(rng, 3.0);
    const Vec3 e = so3::angular_velocity_error(R2, O2, R1, O1);
    CHECK((e + R2.transpose() * R1 * O1 - O2).norm() < 1e-12);
  }
}

TEST_CASE("E matrix: identity case and unit-half spectral norm") {
  CHECK((so3::e_matrix(Mat3::Identity(), Mat3::Identity()) - 0.5 * Mat3::Identity()).norm() < 1e-15);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    const Mat3 R1 = random_rotation(rng), R2 = random_rotation(rng);
    if (1.0 + (R1.transpose() * R2).trace() < 1e-6) continue;
    const Eigen::JacobiSVD<Mat3> svd(so3::e_matrix(R2, R1));
    CHECK(std::abs(svd.singularValues()(0) - 0.5) < 1e-9);
  }
}

TEST_CASE("time derivatives of psi and e_R agree with central differences") {
  // Both attitudes move: dR_i/dt = R_i hat(Omega_i).
  std::mt19937_64 rng(9);
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const Mat3 R1 = random_rotation(rng), R2 = random_rotation(rng);
    if (1.0 + (R1.transpose() * R2).trace() < 0.01) continue;
    const Vec3 O1 = random_vec(rng, 2.0), O2 = random_vec(rng, 2.0);
    auto at = [&](double t) { return so3::config_error(R2 * so3::exp(t * O2), R1 * so3::exp(t * O1)); };
    const so3::AttitudeError p = at(h), m = at(-h);
    const Vec3 eO = so3::angular_velocity_error(R2, O2, R1, O1);
    const so3::AttitudeError a = at(0.0);

    const double psi_dot_fd = (p.psi - m.psi) / (2 * h);
    const double psi_dot = a.e_R.dot(eO);
    CHECK(std::abs(psi_dot_fd - psi_dot) <= 1e-5 * std::max(1.0, std::abs(psi_dot)));

    const Vec3 eR_dot_fd = (p.e_R - m.e_R) / (2 * h);
    const Vec3 eR_dot = so3::e_matrix(R2, R1) * eO;
    CHECK((eR_dot_fd - eR_dot).norm() <= 1e-5 * std::max(1.0, eR_dot.norm()));
  }
}

TEST_CASE("dexp_inv gives the exponential-coordinate rate") {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 50; ++i) {
    const Vec3 th = random_vec(rng, 0.05), w = random_vec(rng, 1.0);
    // R(t) = exp(th + t d) with d = dexp_inv(th, w) must satisfy R^T R' = hat(w).
    const Vec3 d = so3::dexp_inv(th, w);
    const double h = 1e-6;
    const Mat3 Rd = (so3::exp(th + h * d) - so3::exp(th - h * d)) / (2 * h);
    const Vec3 w_back = so3::vee(0.5 * ((so3::exp(th).transpose() * Rd) - (so3::exp(th).transpose() * Rd).transpose()));
    // Truncation after the double bracket leaves an O(|th|^4) error.
    CHECK((w_back - w).norm() < 1e-6);
  }
}

TEST_CASE("saturation maps") {
  const SaturationMaps z = saturation_maps(Vec3::Zero());
  CHECK(z.tanh_vec.isZero(0.0));
  CHECK(z.cosh2 == Vec3::Ones());
  CHECK(z.sech2 == Vec3::Ones());

  const SaturationMaps big = saturation_maps(Vec3(50, 0, 0));
  CHECK(std::abs(big.tanh_vec.x() - 1.0) < 1e-12);
  CHECK(big.sech2.x() >= 0.0);
  CHECK(big.sech2.x() < 1e-40);
  CHECK(std::isfinite(big.sech2.x() * 1e300));
  CHECK(sech2(800.0) == 0.0);
  CHECK(sech2(1.0) == doctest::Approx(1.0 / (std::cosh(1.0) * std::cosh(1.0))).epsilon(1e-15));
  CHECK(sech2(31.0) == doctest::Approx(1.0 / (std::cosh(31.0) * std::cosh(31.0))).epsilon(1e-12));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 v = random_vec(rng, 100.0);
    CHECK(tanh_vec(v).norm() <= std::sqrt(3.0));
  }
}
