#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "geotrack/errors.hpp"
#include "geotrack/estimator.hpp"
#include "geotrack/trajectory.hpp"

using namespace geotrack;

TEST_CASE("ramp input: estimates follow the closed-form lag") {
  EstimatorGains g;
  g.gamma1 = 0.05;
  g.gamma2 = 0.08;
  g.h2 = 1.0;
  const Vec3 c(1.0, -2.0, 0.5);
  const double dt = 1e-3;
  EstimatorStep st = estimator_advance(EstimatorState{}, g, Vec3::Zero(), dt);
  CHECK(st.out.g_xd.isZero(0.0));
  CHECK(st.out.g_vd.isZero(0.0));
  const double A = -g.gamma1 / (g.gamma1 - g.gamma2);
  double worst_x = 0.0, worst_v = 0.0;
  for (int k = 1; k <= 2000; ++k) {
    const double t = k * dt;
    st = estimator_advance(st.state, g, c * t, dt);
    const double e1 = std::exp(-t / g.gamma1), e2 = std::exp(-t / g.gamma2);
    const Vec3 g_xd = c * (1.0 - e1);
    const Vec3 g_fd = c * (1.0 - e2) + c * A * (e1 - e2);
    const Vec3 g_vd = (g_xd - g_fd) / g.gamma2;
    worst_x = std::max(worst_x, (st.out.g_xd - g_xd).norm());
    worst_v = std::max(worst_v, (st.out.g_vd - g_vd).norm());
  }
  // RK4 error on the filter states is divided by gamma in the outputs.
  CHECK(worst_x < 1e-8);
  CHECK(worst_v < 1e-6);
  CHECK((st.out.g_xd - c).norm() < 1e-10);
  CHECK(st.out.g_vd.norm() < 1e-8);
}

TEST_CASE("constant input: everything stays at zero") {
  const EstimatorGains g;
  const Vec3 p(3.0, 1.0, -2.0);
  EstimatorStep st = estimator_advance(EstimatorState{}, g, p, 1e-3);
  for (int k = 0; k < 500; ++k) st = estimator_advance(st.state, g, p, 1e-3);
  CHECK(st.out.g_xd.norm() < 1e-9);
  CHECK(st.out.g_vd.norm() < 1e-8);
  CHECK(st.out.g1.norm() < 1e-8);
}

TEST_CASE("projection: inactive inside, passive and norm-reducing on the shell") {
  EstimatorGains g;
  g.h2 = 2.0;
  g.eps0 = 0.1;
  bool active = true;
  const Vec3 phi(1, 2, 3);
  CHECK(projection_rate(Vec3(0.5, 0, 0), phi, g, &active) == phi);
  CHECK_FALSE(active);
  // Exactly on the inner boundary the nominal rate is kept.
  CHECK(projection_rate(Vec3(2.0, 0, 0), phi, g, &active) == phi);
  CHECK_FALSE(active);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double r_in = g.h2, r_out = g.g1_radius();
  for (int i = 0; i < 2000; ++i) {
    const Vec3 dir = Vec3(u(rng), u(rng), u(rng)).normalized();
    const double r = r_in + (r_out - r_in) * (0.5 * (u(rng) + 1.0));
    const Vec3 g1 = r * dir;
    const Vec3 p = 10.0 * Vec3(u(rng), u(rng), u(rng));
    const Vec3 pr = projection_rate(g1, p, g, &active);
    if (active) {
      // On the outer shell the radial component is removed completely.
      CHECK(g1.dot(pr) <= g1.dot(p) + 1e-12);
    }
    if (r >= r_out - 1e-12) CHECK(g1.dot(pr) <= 1e-9);
    // Any admissible true value theta with ||theta|| <= h2 sees a passive correction.
    const Vec3 theta = g.h2 * Vec3(u(rng), u(rng), u(rng)).normalized() * 0.5 * (u(rng) + 1.0);
    CHECK((g1 - theta).dot(pr - p) <= 1e-9);
  }
}

TEST_CASE("circle: sinusoidal lag of the linear filters and the projection ball") {
  const double r = 1.0, w = 0.5;
  const auto tr = builtin("circle", {{"r", r}, {"omega", w}});
  EstimatorGains g;
  g.gamma1 = g.gamma2 = g.gamma21 = 0.05;
  g.h2 = r * w * w;
  const double dt = 1e-3;
  EstimatorStep st = estimator_advance(EstimatorState{}, g, tr->sample(0.0).x_d, dt);
  // Steady state: g_xd = x_d' / (1 + j w g1), g_vd = x_d'' / ((1 + j w g1)(1 + j w g2)).
  const std::complex<double> j(0.0, 1.0);
  const double lag_x = std::abs(1.0 - 1.0 / (1.0 + j * w * g.gamma1)) * r * w;
  const double lag_v = std::abs(1.0 - 1.0 / ((1.0 + j * w * g.gamma1) * (1.0 + j * w * g.gamma2))) * r * w * w;
  double max_norm = 0.0, ex = 0.0, ev = 0.0;
  for (int k = 1; k <= 20000; ++k) {
    const double t = k * dt;
    st = estimator_advance(st.state, g, tr->sample(t).x_d, dt);
    max_norm = std::max(max_norm, st.out.g1.norm());
    if (t > 5.0) {
      const OracleDerivatives d = oracle_derivatives(*tr, t);
      ex = std::max(ex, (st.out.g_xd - d.x_d_dot).norm());
      ev = std::max(ev, (st.out.g_vd - d.x_d_ddot).norm());
    }
  }
  CHECK(max_norm <= g.g1_radius() * (1.0 + 1e-12));
  CHECK(ex == doctest::Approx(lag_x).epsilon(1e-4));
  CHECK(ev == doctest::Approx(lag_v).epsilon(1e-3));
}

TEST_CASE("estimator rejects bad gains and inputs") {
  EstimatorGains g;
  g.gamma1 = 0.0;
  CHECK_THROWS_AS(estimator_advance(EstimatorState{}, g, Vec3::Zero(), 1e-3), Error);
  EstimatorStep st = estimator_advance(EstimatorState{}, EstimatorGains{}, Vec3::Zero(), 1e-3);
  try {
    estimator_advance(st.state, EstimatorGains{}, Vec3(std::nan(""), 0, 0), 1e-3);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
  }
}
