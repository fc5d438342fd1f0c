#include "geotrack/controller.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "geotrack/errors.hpp"

namespace geotrack {

void ControllerGains::validate() const {
  for (double v : {k_alpha, alpha_x, alpha_f, k_R, k_Omega, gamma3, gamma4, delta_A}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::BadParams, "controller gains must be positive and finite");
    }
  }
  if (delta_A > 1.0) throw Error(ErrorKind::BadParams, "delta_A must be in (0, 1]");
}

ThrustStrategy parse_thrust_strategy(const std::string& name) {
  if (name == "lee2010") return ThrustStrategy::Lee2010;
  if (name == "kar") return ThrustStrategy::KarMagnitude;
  if (name == "proposed") return ThrustStrategy::ProposedHalfAngle;
  throw Error(ErrorKind::ConfigError, "unknown thrust strategy '" + name + "'");
}

std::string to_string(ThrustStrategy s) {
  switch (s) {
    case ThrustStrategy::Lee2010: return "lee2010";
    case ThrustStrategy::KarMagnitude: return "kar";
    case ThrustStrategy::ProposedHalfAngle: return "proposed";
  }
  return "?";
}

PositionErrors position_errors(const MultirotorState& s, const Vec3& x_d, const Vec3& v_d_used,
                               const PositionLoopState& pls, const ControllerGains& gains) {
  PositionErrors e;
  e.e_x = s.x - x_d;
  e.e_alpha = (s.v - v_d_used) + gains.alpha_x * tanh_vec(e.e_x) + tanh_vec(pls.e_f);
  return e;
}

Vec3 ef_rate(const Vec3& e_f, const Vec3& e_alpha, const Vec3& e_x, const ControllerGains& gains) {
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    const double c = std::cosh(e_f[i]);
    const double drive = -gains.k_alpha * e_alpha[i] + std::tanh(e_x[i]);
    out[i] = c * c * drive - gains.alpha_f * c * std::sinh(e_f[i]);
  }
  return out;
}

PositionLoopState ef_advance(const PositionLoopState& pls, const Vec3& e_alpha, const Vec3& e_x,
                             const ControllerGains& gains, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::BadParams, "dt must be positive");
  const Vec3 base = e_alpha - tanh_vec(pls.e_f);
  auto f = [&](const Vec3& ef) { return ef_rate(ef, base + tanh_vec(ef), e_x, gains); };
  const Vec3 y = pls.e_f;
  const Vec3 k1 = f(y);
  const Vec3 k2 = f(y + 0.5 * dt * k1);
  const Vec3 k3 = f(y + 0.5 * dt * k2);
  const Vec3 k4 = f(y + dt * k3);
  PositionLoopState out;
  out.e_f = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.e_f.allFinite() || out.e_f.cwiseAbs().maxCoeff() > kEfAbortLimit) {
    throw Error(ErrorKind::NonFinite, "auxiliary position filter e_f diverged; gains are misconfigured");
  }
  return out;
}

Vec3 virtual_input(const Vec3& e_x, const Vec3& e_f, const Vec3& g1, const VehicleParams& p,
                   const ControllerGains& gains) {
  return p.m * p.g * e3() - p.m * g1 + 2.0 * p.m * tanh_vec(e_x) - p.m * gains.k_alpha * tanh_vec(e_f);
}

Mat3 desired_attitude(const Vec3& f_d, const Vec3& x_Bd, const ControllerGains& gains) {
  const double n = f_d.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::ZeroThrustDirection, "virtual input f_d is zero");
  const Vec3 z = f_d / n;
  const Vec3 a = x_Bd.cross(z);
  const double an = a.norm();
  if (an < gains.delta_A) {
    throw Error(ErrorKind::HeadingSingular, "heading is nearly parallel to the thrust direction");
  }
  const Vec3 y = -a / an;
  const Vec3 x = y.cross(z);
  Mat3 R;
  R.col(0) = x;
  R.col(1) = y;
  R.col(2) = z;
  return R;
}

double thrust(const Vec3& f_d, const Mat3& R_c, const Mat3& R, ThrustStrategy strategy) {
  const double n = f_d.norm();
  const double c = (R_c * e3()).dot(R * e3());
  switch (strategy) {
    case ThrustStrategy::Lee2010: return n * c;
    case ThrustStrategy::KarMagnitude: return n;
    case ThrustStrategy::ProposedHalfAngle: return n * std::sqrt(std::max(0.0, 0.5 * (1.0 + c)));
  }
  return 0.0;
}

Vec3 attitude_filter_accel(const Mat3& R_d, const Vec3& Omega_d, const Mat3& R_c, const ControllerGains& gains) {
  const Vec3 e_Rdc = so3::config_error(R_d, R_c).e_R;
  const Vec3 e_Odc = Omega_d + e_Rdc / gains.gamma3;
  return -e_Odc / gains.gamma4 + e_Rdc + so3::e_matrix(R_d, R_c) * Omega_d / gains.gamma3;
}

double attitude_filter_stiffness(const ControllerGains& gains) {
  // Near R_d = R_c: de/dt ~ w/2, dw/dt ~ a w + b e.
  const double a = -1.0 / gains.gamma4 + 1.0 / (2.0 * gains.gamma3);
  const double b = 1.0 - 1.0 / (gains.gamma3 * gains.gamma4);
  const std::complex<double> disc = std::sqrt(std::complex<double>(a * a + 2.0 * b));
  return std::max(std::abs(0.5 * (a + disc)), std::abs(0.5 * (a - disc)));
}

namespace {

constexpr int kMaxExplicitSubsteps = 64;

void require_finite(const AttitudeFilterState& s) {
  if (!s.R_d.allFinite() || !s.Omega_d.allFinite()) {
    throw Error(ErrorKind::NonFinite, "attitude filter state is not finite");
  }
}

AttitudeFilterState rk4_substep(const AttitudeFilterState& s, const RcHold& rc, double t0, double h,
                                const ControllerGains& gains) {
  auto Rc = [&](double t) { return Mat3(rc.R_c * so3::exp(t * rc.omega)); };
  auto stage = [&](const Vec3& th, const Vec3& Om, double t, Vec3& kth, Vec3& kOm) {
    kth = so3::dexp_inv(th, Om);
    kOm = attitude_filter_accel(s.R_d * so3::exp(th), Om, Rc(t), gains);
  };
  Vec3 t1, o1, t2, o2, t3, o3, t4, o4;
  stage(Vec3::Zero(), s.Omega_d, t0, t1, o1);
  stage(0.5 * h * t1, s.Omega_d + 0.5 * h * o1, t0 + 0.5 * h, t2, o2);
  stage(0.5 * h * t2, s.Omega_d + 0.5 * h * o2, t0 + 0.5 * h, t3, o3);
  stage(h * t3, s.Omega_d + h * o3, t0 + h, t4, o4);
  AttitudeFilterState out;
  out.Omega_d = s.Omega_d + h / 6.0 * (o1 + 2.0 * o2 + 2.0 * o3 + o4);
  out.R_d = s.R_d * so3::exp(h / 6.0 * (t1 + 2.0 * t2 + 2.0 * t3 + t4));
  return out;
}

// Solve w = Omega + h F(R exp(h w), w, R_c(t0 + h)) by damped Newton with a
// finite-difference Jacobian rebuilt every iteration. The fast mode makes the
// residual map steep, so a frozen Jacobian stalls during large transients.
AttitudeFilterState implicit_substep(const AttitudeFilterState& s, const RcHold& rc, double t0, double h,
                                     const ControllerGains& gains) {
  const Mat3 Rc1 = rc.R_c * so3::exp((t0 + h) * rc.omega);
  auto G = [&](const Vec3& w) -> Vec3 {
    return w - s.Omega_d - h * attitude_filter_accel(s.R_d * so3::exp(h * w), w, Rc1, gains);
  };
  Vec3 w = s.Omega_d;
  Vec3 g = G(w);
  for (int it = 0; it < 100; ++it) {
    Mat3 Jac;
    for (int j = 0; j < 3; ++j) {
      const double d = 1e-7 * std::max(1.0, std::abs(w[j]));
      Vec3 wp = w;
      wp[j] += d;
      Jac.col(j) = (G(wp) - g) / d;
    }
    const Vec3 dw = Jac.partialPivLu().solve(g);
    double lam = 1.0;
    Vec3 w_try = w - dw, g_try = G(w_try);
    while (g_try.norm() > g.norm() && lam > 1e-6) {
      lam *= 0.5;
      w_try = w - lam * dw;
      g_try = G(w_try);
    }
    w = w_try;
    g = g_try;
    if (lam * dw.norm() <= 1e-13 * (1.0 + w.norm())) break;
  }
  AttitudeFilterState out;
  out.Omega_d = w;
  out.R_d = s.R_d * so3::exp(h * w);
  return out;
}

}  // namespace

AttitudeFilterStep attitude_filter_advance(const AttitudeFilterState& afs, const RcHold& rc,
                                           const ControllerGains& gains, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::BadParams, "dt must be positive");
  AttitudeFilterStep res;
  const double rho = attitude_filter_stiffness(gains);
  const int n_explicit = std::max(1, static_cast<int>(std::ceil(dt * rho / 0.5)));
  AttitudeFilterState s = afs;
  if (n_explicit <= kMaxExplicitSubsteps) {
    res.substeps = n_explicit;
    const double h = dt / n_explicit;
    for (int i = 0; i < n_explicit; ++i) s = rk4_substep(s, rc, i * h, h, gains);
  } else {
    res.implicit = true;
    res.substeps = std::max(1, static_cast<int>(std::ceil(dt / (0.25 * gains.gamma3))));
    const double h = dt / res.substeps;
    for (int i = 0; i < res.substeps; ++i) s = implicit_substep(s, rc, i * h, h, gains);
  }
  if (so3::orthogonality_residual(s.R_d) > 1e-12) s.R_d = so3::project(s.R_d);
  require_finite(s);
  // Keeps the NearAntipodal contract on the outgoing state.
  so3::config_error(s.R_d, rc.R_c * so3::exp(dt * rc.omega));
  res.state = s;
  res.Omega_d_dot = (s.Omega_d - afs.Omega_d) / dt;
  return res;
}

Vec3 moment(const MultirotorState& s, const AttitudeFilterState& afs, const Vec3& Omega_d_dot,
            const VehicleParams& p, const ControllerGains& gains) {
  const Vec3 e_R = so3::config_error(s.R, afs.R_d).e_R;
  const Vec3 e_O = so3::angular_velocity_error(s.R, s.Omega, afs.R_d, afs.Omega_d);
  const Mat3 RtRd = s.R.transpose() * afs.R_d;
  return -gains.k_R * e_R - gains.k_Omega * e_O + s.Omega.cross(p.J * s.Omega) -
         p.J * (so3::hat(s.Omega) * RtRd * afs.Omega_d - RtRd * Omega_d_dot);
}

}  // namespace geotrack
