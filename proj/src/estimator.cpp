#include "geotrack/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "geotrack/errors.hpp"

namespace geotrack {

void EstimatorGains::validate() const {
  for (double v : {gamma1, gamma2, gamma21, eps0, h2}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::BadParams, "estimator gains must be positive and finite");
    }
  }
}

double EstimatorGains::g1_radius() const { return h2 * std::sqrt(1.0 + eps0); }

Vec3 projection_rate(const Vec3& g1, const Vec3& phi, const EstimatorGains& gains, bool* active) {
  const double h2sq = gains.h2 * gains.h2;
  const double n2 = g1.squaredNorm();
  const double f = (n2 - h2sq) / (gains.eps0 * h2sq);
  // strict inequalities: on the boundary f == 0 the nominal rate is kept
  const bool on = f > 0.0 && phi.dot(g1) > 0.0;
  if (active) *active = on;
  if (!on) return phi;
  return phi - f * (g1.dot(phi) / n2) * g1;
}

namespace {

struct Filters {
  Vec3 x_fd, g_fd, g1;
};

struct Signals {
  Vec3 g_xd, g_vd;
};

Signals signals(const Filters& s, const EstimatorState& st, const EstimatorGains& gn, const Vec3& x_d, double t) {
  Signals o;
  o.g_xd = (x_d - s.x_fd - std::exp(-t / gn.gamma1) * st.x_d0) / gn.gamma1;
  o.g_vd = (o.g_xd - s.g_fd - std::exp(-t / gn.gamma2) * st.g_xd0) / gn.gamma2;
  return o;
}

Filters rate(const Filters& s, const EstimatorState& st, const EstimatorGains& gn, const Vec3& x_d, double t) {
  const Signals sig = signals(s, st, gn, x_d, t);
  Filters d;
  d.x_fd = (x_d - s.x_fd) / gn.gamma1;
  d.g_fd = (sig.g_xd - s.g_fd) / gn.gamma2;
  d.g1 = projection_rate(s.g1, (sig.g_vd - s.g1) / gn.gamma21, gn);
  return d;
}

Filters axpy(const Filters& a, double h, const Filters& k) {
  return {a.x_fd + h * k.x_fd, a.g_fd + h * k.g_fd, a.g1 + h * k.g1};
}

}  // namespace

EstimatorOutput estimator_outputs(const EstimatorState& st, const EstimatorGains& gains, const Vec3& x_d) {
  const Signals sig = signals({st.x_fd, st.g_fd, st.g1}, st, gains, x_d, st.t);
  EstimatorOutput out;
  out.g_xd = sig.g_xd;
  out.g_vd = sig.g_vd;
  out.g1 = st.g1;
  out.phi = (sig.g_vd - st.g1) / gains.gamma21;
  projection_rate(st.g1, out.phi, gains, &out.projection_active);
  return out;
}

EstimatorStep estimator_advance(const EstimatorState& st, const EstimatorGains& gains, const Vec3& x_d, double dt) {
  gains.validate();
  if (!x_d.allFinite()) throw Error(ErrorKind::NonFinite, "estimator input is not finite");
  EstimatorStep res{st, {}};
  EstimatorState& n = res.state;
  if (!st.started) {
    n = EstimatorState{};
    n.x_d0 = x_d;
    n.x_d_prev = x_d;
    n.history = 1;
    n.started = true;
    res.out = estimator_outputs(n, gains, x_d);
    return res;
  }
  if (!(dt > 0.0)) throw Error(ErrorKind::BadParams, "dt must be positive");

  // Linear interpolation leaves a dt^2 x_d''/8 error that the 1/gamma scaling
  // of the outputs amplifies; the cubic pushes it to O(dt^4).
  const bool uniform = st.history >= 2 && dt == st.dt_prev;
  const int held = uniform ? st.history : 1;
  const Vec3 mid = held >= 3 ? Vec3((st.x_d_prev3 - 5.0 * st.x_d_prev2 + 15.0 * st.x_d_prev + 5.0 * x_d) / 16.0)
                             : Vec3(0.5 * (st.x_d_prev + x_d));
  const double t0 = st.t;
  const Filters y{st.x_fd, st.g_fd, st.g1};
  const Filters k1 = rate(y, st, gains, st.x_d_prev, t0);
  const Filters k2 = rate(axpy(y, 0.5 * dt, k1), st, gains, mid, t0 + 0.5 * dt);
  const Filters k3 = rate(axpy(y, 0.5 * dt, k2), st, gains, mid, t0 + 0.5 * dt);
  const Filters k4 = rate(axpy(y, dt, k3), st, gains, x_d, t0 + dt);
  n.x_fd = y.x_fd + dt / 6.0 * (k1.x_fd + 2.0 * k2.x_fd + 2.0 * k3.x_fd + k4.x_fd);
  n.g_fd = y.g_fd + dt / 6.0 * (k1.g_fd + 2.0 * k2.g_fd + 2.0 * k3.g_fd + k4.g_fd);
  n.g1 = y.g1 + dt / 6.0 * (k1.g1 + 2.0 * k2.g1 + 2.0 * k3.g1 + k4.g1);

  // The continuous projection keeps g1 in the ball; RK4 can overshoot by O(dt^5).
  const double rmax = gains.g1_radius();
  const double r = n.g1.norm();
  if (r > rmax) n.g1 *= rmax / r;

  n.t = t0 + dt;
  n.x_d_prev3 = st.x_d_prev2;
  n.x_d_prev2 = st.x_d_prev;
  n.x_d_prev = x_d;
  n.history = std::min(3, held + 1);
  n.dt_prev = dt;
  if (!n.x_fd.allFinite() || !n.g_fd.allFinite() || !n.g1.allFinite()) {
    throw Error(ErrorKind::NonFinite, "estimator state is not finite");
  }
  res.out = estimator_outputs(n, gains, x_d);
  return res;
}

}  // namespace geotrack
