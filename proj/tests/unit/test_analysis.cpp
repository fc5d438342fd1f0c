#include <cmath>
#include <random>

#include "doctest.h"
#include "geotrack/analysis.hpp"
#include "geotrack/errors.hpp"

using namespace geotrack;

namespace {

CertificateInputs worked_example() {
  CertificateInputs ci;
  ci.vehicle.m = 1.0;
  ci.vehicle.g = 9.81;
  ci.ctrl.k_alpha = 1.0;
  ci.est.h2 = 2.0;
  ci.g1_bound = G1Bound::AsPrinted;
  return ci;
}

const Condition& find(const CertificateReport& r, const std::string& id) {
  for (const auto& c : r.conditions) {
    if (c.id == id) return c;
  }
  throw std::runtime_error("no condition " + id);
}

}  // namespace

TEST_CASE("thrust bounds for the worked example") {
  const CertificateReport r = compute_constants(worked_example());
  // 9.81 + 2 + 2 sqrt3 + sqrt3 and 9.81 - 2 - 2 - 1
  CHECK(r.alpha[1] == doctest::Approx(17.0061524227).epsilon(1e-10));
  CHECK(std::round(r.alpha[1] * 1e4) / 1e4 == doctest::Approx(17.0062).epsilon(1e-12));
  CHECK(r.alpha[2] == doctest::Approx(4.81).epsilon(1e-12));
  const Condition& c = find(r, "thrust_direction_exists");
  CHECK(c.pass);
  CHECK(c.margin == doctest::Approx(9.81 - 2.0 - 2.0 - 1.0).epsilon(1e-12));
}

TEST_CASE("projection-ball variant widens the g1 bound") {
  CertificateInputs ci = worked_example();
  ci.g1_bound = G1Bound::ProjectionBall;
  ci.est.eps0 = 0.21;  // sqrt(1.21) = 1.1
  const CertificateReport r = compute_constants(ci);
  CHECK(r.alpha[1] == doctest::Approx(9.81 + 2.2 + 3.0 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK(r.alpha[2] == doctest::Approx(9.81 - 2.2 - 3.0).epsilon(1e-12));
}

TEST_CASE("gamma3 limit from the attitude-filter decay condition") {
  CertificateInputs ci = worked_example();
  const double limit = 1.0 / (4.0 * 17.0061524227 * 17.0061524227);
  CHECK(limit == doctest::Approx(8.645e-4).epsilon(1e-4));
  ci.ctrl.gamma3 = 0.99 * limit;
  CHECK(find(compute_constants(ci), "lambda4_positive").pass);
  ci.ctrl.gamma3 = 1.01 * limit;
  CHECK_FALSE(find(compute_constants(ci), "lambda4_positive").pass);
}

TEST_CASE("hover with settled filters: only the Omega_c term remains in D") {
  CertificateInputs ci = worked_example();
  ci.ctrl.gamma3 = 4e-4;
  ci.ctrl.gamma4 = 1e-9;
  ci.rho02 = 0.7;
  // h2 = h3 = 0 and zero initial errors
  const CertificateReport r = compute_constants(ci);
  for (int i = 3; i <= 7; ++i) CHECK(r.alpha[i] == 0.0);
  const double g3 = ci.ctrl.gamma3, g4 = ci.ctrl.gamma4;
  CHECK(r.D == doctest::Approx((g3 / 2 + g4 / (8 * g3 * g3)) * 0.49).epsilon(1e-14));
  CHECK(r.ultimate_bound == doctest::Approx(r.D / r.lambda_V).epsilon(1e-14));
}

TEST_CASE("failing conditions are named") {
  CertificateInputs ci = worked_example();
  ci.ctrl.k_alpha = ci.vehicle.g;
  std::vector<std::string> f = compute_constants(ci).failing();
  CHECK(std::find(f.begin(), f.end(), "thrust_direction_exists") != f.end());

  ci = worked_example();
  ci.ctrl.alpha_f = ci.ctrl.alpha_x;
  f = compute_constants(ci).failing();
  CHECK(std::find(f.begin(), f.end(), "lambda3_positive") != f.end());

  ci = worked_example();
  ci.traj.bounded = false;
  f = compute_constants(ci).failing();
  CHECK(std::find(f.begin(), f.end(), "trajectory_derivatives_bounded") != f.end());
}

TEST_CASE("certificate output is deterministic") {
  CertificateInputs ci = worked_example();
  ci.traj.h = {0.5, 0.25, 0.125, 0.0625, 0.5, 0.25};
  ci.init = {0.5, 0.25, 10.0, 0.25};
  const std::string a = compute_constants(ci).to_key_value();
  const std::string b = compute_constants(ci).to_key_value();
  CHECK(a == b);
  CHECK(a.find("alpha1 = 17.00615242") != std::string::npos);
}

TEST_CASE("filter bounds grow with the initial errors and shrink with the gains") {
  CertificateInputs ci = worked_example();
  ci.traj.h = {0.5, 0.25, 0.125, 0.0625, 0.5, 0.25};
  const CertificateReport settled = compute_constants(ci);
  CHECK(settled.alpha[3] == doctest::Approx(ci.est.gamma1 * 0.25));
  CHECK(settled.alpha[4] == doctest::Approx(ci.est.gamma1 * 0.125));
  CHECK(settled.D_post_transient == doctest::Approx(settled.D));

  ci.init.e_gv0 = 5.0;
  const CertificateReport started = compute_constants(ci);
  CHECK(started.alpha[5] == 5.0);
  CHECK(started.D > settled.D);
  CHECK(started.D_post_transient == doctest::Approx(settled.D_post_transient));

  // Uniform scaling shrinks D only while gamma4 << gamma3^2.
  ci.ctrl.gamma3 = 4e-4;
  ci.ctrl.gamma4 = 1e-11;
  const CertificateReport base = compute_constants(ci);
  CertificateInputs half = ci;
  half.est.gamma1 *= 0.5;
  half.est.gamma2 *= 0.5;
  half.est.gamma21 *= 0.5;
  half.ctrl.gamma3 *= 0.5;
  half.ctrl.gamma4 *= 0.5;
  CHECK(compute_constants(half).D_post_transient < base.D_post_transient);
}

TEST_CASE("Lyapunov function: zero at the origin and ln cosh position term") {
  const VehicleParams p;
  const ControllerGains g;
  LyapunovInputs in;
  LyapunovValues v = lyapunov_eval(in, p, g, 0.05);
  CHECK(v.V == 0.0);
  CHECK(v.e_norm_sq == 0.0);

  in.s.x = Vec3(1, 0, 0);
  in.s.v = -g.alpha_x * tanh_vec(in.s.x);  // cancels the e_alpha contribution
  v = lyapunov_eval(in, p, g, 0.05);
  CHECK(v.V3 == doctest::Approx(p.m * std::log(std::cosh(1.0))).epsilon(1e-14));
  CHECK(v.V3 == doctest::Approx(0.433780830483027).epsilon(1e-12));

  in.s.x = Vec3(800, 0, 0);
  in.s.v = -g.alpha_x * tanh_vec(in.s.x);
  v = lyapunov_eval(in, p, g, 0.05);
  CHECK(std::isfinite(v.V3));
  CHECK(v.V3 == doctest::Approx(800.0 - std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("attitude Lyapunov function sits between its two quadratic bounds") {
  VehicleParams p;
  p.J = Vec3(0.05, 0.06, 0.09).asDiagonal();
  const double k_R = 5.0, c1 = 0.3;
  const double lmin = p.lambda_min_J(), lmax = p.lambda_max_J();
  Eigen::Matrix2d W11, W12;
  W11 << k_R, -c1 / 2, -c1 / 2, lmin / 2;
  W12 << 2 * k_R, c1 / 2, c1 / 2, lmax / 2;
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const Mat3 R = so3::exp(2.5 * Vec3(u(rng), u(rng), u(rng)) / std::sqrt(3.0));
    const AttitudeFilterState afs{so3::exp(0.3 * Vec3(u(rng), u(rng), u(rng))), Vec3(u(rng), u(rng), u(rng))};
    const Vec3 Om = 2.0 * Vec3(u(rng), u(rng), u(rng));
    if (so3::config_error(R, afs.R_d).psi > 2.0 - 1e-6) continue;
    const Eigen::Vector2d e1(so3::config_error(R, afs.R_d).e_R.norm(),
                             so3::angular_velocity_error(R, Om, afs.R_d, afs.Omega_d).norm());
    const double V2 = lyapunov_v2(R, Om, afs, p.J, k_R, c1);
    CHECK(e1.dot(W11 * e1) <= V2 + 1e-12);
    CHECK(V2 <= e1.dot(W12 * e1) + 1e-12);
  }
}

TEST_CASE("Omega_c diagnostic") {
  CHECK(omega_c_diagnostic(Mat3::Identity(), Mat3::Identity(), 1e-3).isZero(0.0));
  const double w = 0.7, t = 1.3, dt = 1e-3;
  const Vec3 oc = omega_c_diagnostic(so3::exp(Vec3(0, 0, w * t)), so3::exp(Vec3(0, 0, w * (t + dt))), dt);
  CHECK((oc - Vec3(0, 0, w)).norm() < 1e-9);
}

TEST_CASE("monitor passes a consistent sample and flags a thrust collapse") {
  CertificateInputs ci = worked_example();
  ci.ctrl.k_R = 50;
  const CertificateReport rep = compute_constants(ci);
  Monitor mon(ci, rep, 1e-3);
  MonitorSample ms;
  ms.f_d = ci.vehicle.m * ci.vehicle.g * e3();
  ms.f = ms.f_d.norm();
  CHECK(mon.observe(ms) == 0);
  ms.t = 1e-3;
  ms.f_d = 0.1 * e3();
  ms.f = 0.1;
  CHECK(mon.observe(ms) > 0);
  CHECK(mon.stats().at("fd_lower_bound").violations == 1);
  for (const auto& id : Monitor::lemma_ids()) CHECK(mon.stats().count(id) == 1);
}

TEST_CASE("attitude isolation decays at least at half the certified rate") {
  CertificateInputs ci;
  ci.vehicle.J = Vec3(0.05, 0.05, 0.09).asDiagonal();
  ci.ctrl.k_R = 20.0;
  ci.ctrl.k_Omega = 4.0;
  ci.c1 = 0.02;  // below 2 lambda_min(J)
  const Mat3 Rd = so3::exp(Vec3(0.2, -0.4, 1.0));
  const IsolationResult r =
      run_attitude_isolation(ci, Rd, so3::exp(Vec3(2.0, 0.5, -0.3)), Vec3(0.5, -0.2, 0.1), 1e-3, 20.0);
  CHECK(r.in_region);
  CHECK(r.psi_stayed_below_2);
  CHECK(r.beta_bar > 0.0);
  CHECK(r.window_points > 100);
  CHECK(r.slope <= -0.5 * r.beta_bar);
}
