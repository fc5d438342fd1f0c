#include "geotrack/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "geotrack/errors.hpp"

namespace geotrack {

InitialFilterErrors initial_filter_errors(const Trajectory& traj, const EstimatorGains& gains) {
  const TrajectorySample s0 = traj.sample(0.0);
  const OracleDerivatives o = oracle_derivatives(traj, 0.0);
  const EstimatorStep st = estimator_advance(EstimatorState{}, gains, s0.x_d, 1.0);
  InitialFilterErrors e;
  const Vec3 e_gx = o.x_d_dot - st.out.g_xd;
  const Vec3 g_xd_dot = e_gx / gains.gamma1;
  e.e_gx0 = e_gx.norm();
  e.e_xdd0 = (o.x_d_ddot - g_xd_dot).norm();
  e.e_gv0 = (g_xd_dot - st.out.g_vd).norm();
  e.e_g10 = (o.x_d_ddot - st.out.g1).norm();
  return e;
}

namespace {

struct FilterAlphas {
  double a3, a4, a5, a6, a7;
};

FilterAlphas filter_alphas(const CertificateInputs& ci, const InitialFilterErrors& e0) {
  const double g1 = ci.est.gamma1, g2 = ci.est.gamma2, g21 = ci.est.gamma21;
  const double h2 = ci.traj.h2(), h3 = ci.traj.h3();
  FilterAlphas a;
  a.a3 = std::max(e0.e_gx0, g1 * h2);
  a.a4 = std::max(e0.e_xdd0, g1 * h3);
  a.a5 = std::max(e0.e_gv0, g2 / g1 * a.a4);
  a.a7 = 8.0 * (a.a4 * a.a4 + a.a5 * a.a5) + 2.0 * g21 * g21 * h3 * h3;
  a.a6 = std::max(e0.e_g10, std::sqrt(a.a7));
  return a;
}

double d_value(const CertificateInputs& ci, double a6, double rho02) {
  const double g3 = ci.ctrl.gamma3, g4 = ci.ctrl.gamma4;
  return (g3 / 2.0 + g4 / (8.0 * g3 * g3)) * rho02 * rho02 + ci.vehicle.m / 2.0 * a6 * a6;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

CertificateReport compute_constants(const CertificateInputs& ci) {
  const double m = ci.vehicle.m, g = ci.vehicle.g;
  const ControllerGains& k = ci.ctrl;
  const double h2p = ci.g1_bound == G1Bound::ProjectionBall ? ci.est.g1_radius() : ci.est.h2;
  const double s3 = std::sqrt(3.0);
  const double lmin = ci.vehicle.lambda_min_J(), lmax = ci.vehicle.lambda_max_J();

  CertificateReport r;
  r.alpha[1] = m * g + m * h2p + 2.0 * s3 * m + s3 * m * k.k_alpha;
  r.alpha[2] = m * g - m * h2p - 2.0 * m - m * k.k_alpha;
  const FilterAlphas fa = filter_alphas(ci, ci.init);
  r.alpha[3] = fa.a3;
  r.alpha[4] = fa.a4;
  r.alpha[5] = fa.a5;
  r.alpha[6] = fa.a6;
  r.alpha[7] = fa.a7;

  const double g3 = k.gamma3, g4 = k.gamma4, c1 = ci.c1;
  const double a1sq = r.alpha[1] * r.alpha[1];
  r.rho03 = m / 2.0 + 1.0 + ci.L1 * ci.L1 * (4.0 * g3 * g3 + g4) / (8.0 * g3 * g3);
  r.lambda[1] = m * k.k_alpha - m * k.alpha_x * (3.0 * k.alpha_x + 1.0) / 2.0 - m * k.alpha_f / 2.0 - r.rho03;
  r.lambda[2] = m * k.alpha_x - m * k.alpha_x * k.alpha_x / 2.0;
  r.lambda[3] = m * k.alpha_f / 2.0 - m * k.alpha_x / 2.0;
  r.lambda[4] = 1.0 / (2.0 * g3) - 2.0 * a1sq;
  r.lambda[5] = 1.0 / (2.0 * g4);
  r.lambda[6] = k.k_Omega - c1 / 2.0 - c1 * k.k_Omega / (2.0 * lmin);
  r.lambda[7] = c1 * k.k_R / lmax - c1 * k.k_Omega / (2.0 * lmin) - 2.0 * a1sq;
  r.lambda_V = *std::min_element(r.lambda.begin() + 1, r.lambda.end());

  r.D = d_value(ci, fa.a6, ci.rho02);
  r.ultimate_bound = r.D / r.lambda_V;
  const FilterAlphas fq = filter_alphas(ci, InitialFilterErrors{});
  r.D_post_transient = d_value(ci, fq.a6, ci.rho02_post_transient);
  r.alpha_post_transient = r.alpha;
  r.alpha_post_transient[3] = fq.a3;
  r.alpha_post_transient[4] = fq.a4;
  r.alpha_post_transient[5] = fq.a5;
  r.alpha_post_transient[6] = fq.a6;
  r.alpha_post_transient[7] = fq.a7;
  r.t_transient = filter_transient_time(ci.est);
  r.ultimate_bound_post_transient = r.D_post_transient / r.lambda_V;

  r.lambda_bar1 = r.lambda[6];
  r.lambda_bar2 = c1 * k.k_R / lmax - c1 * k.k_Omega / (2.0 * lmin);
  Eigen::Matrix2d W12;
  W12 << 2.0 * k.k_R, c1 / 2.0, c1 / 2.0, lmax / 2.0;
  const double w12max = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(W12).eigenvalues().maxCoeff();
  r.beta_bar = std::min(r.lambda_bar1, r.lambda_bar2) / w12max;
  r.roa_eomega_coeff = 2.0 * k.k_R / lmax;

  auto add = [&](std::string id, std::string stmt, double margin, bool inclusive = false) {
    const bool pass = inclusive ? margin >= 0.0 : margin > 0.0;
    r.conditions.push_back({std::move(id), std::move(stmt), margin, pass});
  };
  add("trajectory_derivatives_bounded", "reference derivatives h1..h6 finite",
      ci.traj.bounded && std::all_of(ci.traj.h.begin(), ci.traj.h.end(), [](double v) { return std::isfinite(v); })
          ? 1.0 : -1.0);
  add("thrust_direction_exists", "k_alpha < g - h2 - 2", g - h2p - 2.0 - k.k_alpha);
  add("lambda1_positive", "m k_alpha - m a_x(3a_x+1)/2 - m a_f/2 - rho03 > 0", r.lambda[1]);
  add("lambda2_positive", "m a_x - m a_x^2/2 > 0", r.lambda[2]);
  add("lambda3_positive", "m a_f/2 - m a_x/2 > 0", r.lambda[3]);
  add("lambda4_positive", "1/(2 gamma3) - 2 alpha1^2 > 0", r.lambda[4]);
  add("lambda5_positive", "1/(2 gamma4) > 0", r.lambda[5]);
  add("lambda6_positive", "k_Omega - c1/2 - c1 k_Omega/(2 lmin(J)) > 0", r.lambda[6]);
  add("lambda7_positive", "c1 k_R/lmax(J) - c1 k_Omega/(2 lmin(J)) - 2 alpha1^2 > 0", r.lambda[7]);
  add("attitude_decay_rate_positive", "beta_bar > 0", r.beta_bar);
  const double need = std::sqrt(2.0 * std::max(ci.V0, r.ultimate_bound) / m);
  add("e_alpha_bar_consistent", "e_alpha_bar >= sqrt(2 max(V(0), D/lambda_V)/m)",
      std::isfinite(need) && r.lambda_V > 0.0 ? ci.e_alpha_bar - need : -1.0, true);
  return r;
}

double filter_transient_time(const EstimatorGains& gains) {
  return 25.0 * std::max({gains.gamma1, gains.gamma2, gains.gamma21});
}

bool CertificateReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.pass; });
}

std::vector<std::string> CertificateReport::failing() const {
  std::vector<std::string> out;
  for (const auto& c : conditions) {
    if (!c.pass) out.push_back(c.id);
  }
  return out;
}

std::string CertificateReport::to_table() const {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "constants\n";
  for (int i = 1; i <= 7; ++i) {
    os << "  alpha" << i << std::setw(20) << alpha[i];
    if (i >= 3) os << "   post-transient " << alpha_post_transient[i];
    os << "\n";
  }
  os << "  rho03 " << std::setw(20) << rho03 << "\n";
  for (int i = 1; i <= 7; ++i) os << "  lambda" << i << std::setw(19) << lambda[i] << "\n";
  os << "  lambda_V" << std::setw(17) << lambda_V << "\n";
  os << "  D       " << std::setw(17) << D << "\n";
  os << "  D/lambda_V" << std::setw(15) << ultimate_bound << "\n";
  os << "  D (post-transient, t >= " << t_transient << " s) " << D_post_transient << "\n";
  os << "  D/lambda_V (post-transient) " << ultimate_bound_post_transient << "\n";
  os << "  beta_bar" << std::setw(17) << beta_bar << "\n";
  os << "  region: Psi(0) < " << roa_psi0_max << ", ||e_Omega(0)||^2 < " << roa_eomega_coeff
     << " * (2 - Psi(0))\n";
  os << "conditions\n";
  for (const auto& c : conditions) {
    os << "  " << (c.pass ? "pass" : "FAIL") << "  " << std::left << std::setw(30) << c.id << std::right
       << " margin " << std::setw(13) << c.margin << "   " << c.statement << "\n";
  }
  return os.str();
}

std::string CertificateReport::to_key_value() const {
  std::ostringstream os;
  for (int i = 1; i <= 7; ++i) os << "alpha" << i << " = " << fmt(alpha[i]) << "\n";
  for (int i = 3; i <= 7; ++i) os << "alpha" << i << "_post_transient = " << fmt(alpha_post_transient[i]) << "\n";
  os << "rho03 = " << fmt(rho03) << "\n";
  for (int i = 1; i <= 7; ++i) os << "lambda" << i << " = " << fmt(lambda[i]) << "\n";
  os << "lambda_V = " << fmt(lambda_V) << "\n";
  os << "D = " << fmt(D) << "\n";
  os << "ultimate_bound = " << fmt(ultimate_bound) << "\n";
  os << "D_post_transient = " << fmt(D_post_transient) << "\n";
  os << "ultimate_bound_post_transient = " << fmt(ultimate_bound_post_transient) << "\n";
  os << "t_transient = " << fmt(t_transient) << "\n";
  os << "beta_bar = " << fmt(beta_bar) << "\n";
  os << "roa_psi0_max = " << fmt(roa_psi0_max) << "\n";
  os << "roa_eomega_coeff = " << fmt(roa_eomega_coeff) << "\n";
  for (const auto& c : conditions) {
    os << "condition." << c.id << " = " << (c.pass ? "pass" : "fail") << "\n";
  }
  return os.str();
}

double lyapunov_v2(const Mat3& R, const Vec3& Omega, const AttitudeFilterState& afs, const Mat3& J, double k_R,
                   double c1) {
  const so3::AttitudeError ed = so3::config_error(R, afs.R_d);
  const Vec3 eO = so3::angular_velocity_error(R, Omega, afs.R_d, afs.Omega_d);
  return 0.5 * eO.dot(J * eO) + k_R * ed.psi + c1 * eO.dot(ed.e_R);
}

LyapunovValues lyapunov_eval(const LyapunovInputs& in, const VehicleParams& p, const ControllerGains& gains,
                             double c1) {
  const double m = p.m;
  const so3::AttitudeError ed = so3::config_error(in.s.R, in.afs.R_d);
  const Vec3 eOd = so3::angular_velocity_error(in.s.R, in.s.Omega, in.afs.R_d, in.afs.Omega_d);
  const so3::AttitudeError edc = so3::config_error(in.afs.R_d, in.R_c);
  const Vec3 eOdc = in.afs.Omega_d + edc.e_R / gains.gamma3;
  const PositionErrors pe = position_errors(in.s, in.x_d, in.x_d_dot, in.pls, gains);
  const Vec3 tx = tanh_vec(pe.e_x), tf = tanh_vec(in.pls.e_f);

  LyapunovValues out;
  out.V2 = 0.5 * eOd.dot(p.J * eOd) + gains.k_R * ed.psi + c1 * eOd.dot(ed.e_R);
  double lncosh = 0.0;
  for (int i = 0; i < 3; ++i) {
    // ln cosh x = |x| + log1p(exp(-2|x|)) - ln 2, safe for large |x|
    const double a = std::abs(pe.e_x[i]);
    lncosh += a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
  }
  out.V3 = m / 2.0 * pe.e_alpha.squaredNorm() + m * lncosh + m / 2.0 * tf.squaredNorm();
  out.V4 = edc.psi + 0.5 * eOdc.squaredNorm();
  out.V = out.V2 + out.V3 + out.V4;
  out.e_norm_sq = ed.e_R.squaredNorm() + eOd.squaredNorm() + edc.e_R.squaredNorm() + eOdc.squaredNorm() +
                  pe.e_alpha.squaredNorm() + tx.squaredNorm() + tf.squaredNorm();
  return out;
}

Vec3 omega_c_diagnostic(const Mat3& R_c_prev, const Mat3& R_c_next, double dt) {
  // Same antipodal guard as the attitude error maps.
  so3::config_error(R_c_next, R_c_prev);
  return so3::log(R_c_prev.transpose() * R_c_next) / dt;
}

OmegaCFit estimate_omega_c_bound(const CertificateInputs& ci, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> nd;
  const double m = ci.vehicle.m;
  const ControllerGains& k = ci.ctrl;
  const double h2p = ci.g1_bound == G1Bound::ProjectionBall ? ci.est.g1_radius() : ci.est.h2;
  // Post-transient bound on ||g_vd||; phi = (g_vd - g1)/gamma21.
  const FilterAlphas fq = filter_alphas(ci, InitialFilterErrors{});
  const double phi_max = (ci.traj.h2() + fq.a5 + fq.a4 + h2p) / ci.est.gamma21;

  auto rand_ball = [&](double radius) {
    Vec3 d(nd(rng), nd(rng), nd(rng));
    d.normalize();
    return Vec3(d * radius * std::cbrt(0.5 * (u(rng) + 1.0)));
  };
  auto rand_sat = [&]() {
    return Vec3(0.999 * u(rng), 0.999 * u(rng), 0.999 * u(rng));
  };

  std::vector<std::pair<double, double>> pts;  // (||e_alpha||, ||Omega_c||)
  for (int i = 0; i < samples; ++i) {
    const Vec3 ea = (i % 4 == 0) ? Vec3(Vec3::Zero()) : Vec3(rand_ball(ci.e_alpha_bar));
    const Vec3 tx = rand_sat(), tf = rand_sat();
    const Vec3 g1 = rand_ball(h2p);
    const Vec3 g1dot = rand_ball(phi_max);
    const double psi = std::numbers::pi * u(rng);
    const double psi_dot = ci.traj.h5() * (u(rng) < 0.0 ? -1.0 : 1.0);

    const Vec3 f_d = m * ci.vehicle.g * e3() - m * g1 + 2.0 * m * tx - m * k.k_alpha * tf;
    const Vec3 ex_dot = ea - k.alpha_x * tx - tf;
    const Vec3 sech2x = Vec3::Ones() - tx.cwiseProduct(tx);
    const Vec3 f_d_dot = -m * g1dot + 2.0 * m * sech2x.cwiseProduct(ex_dot) + m * k.k_alpha * k.k_alpha * ea -
                         m * k.k_alpha * tx + m * k.k_alpha * k.alpha_f * tf;
    const double tau = 1e-6;
    auto Rc = [&](double s) {
      return desired_attitude(f_d + s * f_d_dot,
                              Vec3(std::cos(psi + s * psi_dot), std::sin(psi + s * psi_dot), 0.0), k);
    };
    try {
      const Vec3 w = so3::log(Rc(-tau).transpose() * Rc(tau)) / (2.0 * tau);
      pts.emplace_back(ea.norm(), w.norm());
    } catch (const Error&) {
      // singular heading or zero thrust: outside the set the bound is about
    }
  }
  OmegaCFit fit;
  fit.samples = static_cast<int>(pts.size());
  for (const auto& [a, w] : pts) {
    if (a == 0.0) fit.rho02 = std::max(fit.rho02, w);
  }
  for (const auto& [a, w] : pts) {
    if (a > 0.0) fit.L1 = std::max(fit.L1, (w - fit.rho02) / a);
  }
  return fit;
}

Monitor::Monitor(const CertificateInputs& ci, const CertificateReport& rep, double dt)
    : ci_(ci), rep_(rep), dt_(dt) {
  const double r = ci.est.g1_radius();
  ball_sq_ = r * r;
  for (const auto& id : lemma_ids()) stats_[id];
  for (const char* id : {"lyapunov_decrease", "psi_R_Rd_below_2", "psi_Rd_Rc_below_2", "projection_ball",
                         "projection_passivity", "omega_c_envelope", "lyapunov_decrease_post_transient",
                         "omega_c_envelope_post_transient"}) {
    stats_[id];
  }
}

std::vector<std::string> Monitor::lemma_ids() {
  return {"fd_lower_bound",           "fd_upper_bound",           "thrust_mismatch",
          "filter_gx",                "filter_xdd",               "filter_gv",
          "filter_g1",                "filter_gx_post_transient", "filter_xdd_post_transient",
          "filter_gv_post_transient", "filter_g1_post_transient"};
}

void Monitor::record(const std::string& id, double slack, double t, long& fresh) {
  CheckStats& s = stats_[id];
  ++s.evaluations;
  if (slack < s.min_slack) {
    s.min_slack = slack;
    s.t_min = t;
  }
  if (!(slack >= -kTolerance)) {
    ++s.violations;
    ++fresh;
  }
}

long Monitor::observe(const MonitorSample& m) {
  long fresh = 0;
  const double t = m.t;
  const double nfd = m.f_d.norm();
  record("fd_lower_bound", nfd - rep_.alpha[2], t, fresh);
  record("fd_upper_bound", rep_.alpha[1] - nfd, t, fresh);
  const Vec3 df = m.f_d - m.f * (m.R * e3());
  record("thrust_mismatch", 2.0 * rep_.alpha[1] * (m.e_Rdc.norm() + m.e_Rd.norm()) - df.norm(), t, fresh);

  const Vec3 e_gx = m.oracle.x_d_dot - m.g_xd;
  const Vec3 g_xd_dot = e_gx / ci_.est.gamma1;
  const Vec3 e_xdd = m.oracle.x_d_ddot - g_xd_dot;
  const Vec3 e_gv = g_xd_dot - m.g_vd;
  const Vec3 e_g1 = m.oracle.x_d_ddot - m.g1;
  record("filter_gx", rep_.alpha[3] - e_gx.norm(), t, fresh);
  record("filter_xdd", rep_.alpha[4] - e_xdd.norm(), t, fresh);
  record("filter_gv", rep_.alpha[5] - e_gv.norm(), t, fresh);
  record("filter_g1", rep_.alpha[6] - e_g1.norm(), t, fresh);
  if (t >= rep_.t_transient) {
    const auto& a = rep_.alpha_post_transient;
    record("filter_gx_post_transient", a[3] - e_gx.norm(), t, fresh);
    record("filter_xdd_post_transient", a[4] - e_xdd.norm(), t, fresh);
    record("filter_gv_post_transient", a[5] - e_gv.norm(), t, fresh);
    record("filter_g1_post_transient", a[6] - e_g1.norm(), t, fresh);
  }

  record("psi_R_Rd_below_2", 2.0 - m.psi_R_Rd, t, fresh);
  record("psi_Rd_Rc_below_2", 2.0 - m.psi_Rd_Rc, t, fresh);
  record("projection_ball", ball_sq_ - m.g1.squaredNorm(), t, fresh);
  if (m.projection_active) record("projection_passivity", -e_g1.dot(m.g1_correction), t, fresh);
  if (m.has_omega_c) {
    record("omega_c_envelope", ci_.L1 * m.e_alpha_norm + ci_.rho02 - m.omega_c.norm(), t, fresh);
    if (t >= rep_.t_transient) {
      record("omega_c_envelope_post_transient",
             ci_.L1 * m.e_alpha_norm + ci_.rho02_post_transient - m.omega_c.norm(), t, fresh);
    }
  }

  // Central difference at the middle of the last three samples.
  V_[0] = V_[1];
  V_[1] = V_[2];
  V_[2] = m.V;
  e_sq_[0] = e_sq_[1];
  e_sq_[1] = e_sq_[2];
  e_sq_[2] = m.e_norm_sq;
  t_[0] = t_[1];
  t_[1] = t_[2];
  t_[2] = t;
  if (++nv_ >= 3) {
    const double vdot = (V_[2] - V_[0]) / (t_[2] - t_[0]);
    if (e_sq_[1] > (1.0 + kDecreaseMargin) * rep_.ultimate_bound) {
      record("lyapunov_decrease", -vdot, t_[1], fresh);
    }
    if (t_[1] >= rep_.t_transient && e_sq_[1] > (1.0 + kDecreaseMargin) * rep_.ultimate_bound_post_transient) {
      record("lyapunov_decrease_post_transient", -vdot, t_[1], fresh);
    }
  }
  return fresh;
}

long Monitor::total_violations() const {
  long n = 0;
  for (const auto& [id, s] : stats_) n += s.violations;
  return n;
}

std::string Monitor::report() const {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "monitor                       evals   violations   min slack      at t\n";
  for (const auto& [id, s] : stats_) {
    os << "  " << std::left << std::setw(28) << id << std::right << std::setw(7) << s.evaluations << std::setw(12)
       << s.violations << std::setw(14);
    if (s.evaluations) {
      os << s.min_slack << std::setw(10) << s.t_min;
    } else {
      os << "-" << std::setw(10) << "-";
    }
    os << "\n";
  }
  return os.str();
}

IsolationResult run_attitude_isolation(const CertificateInputs& ci, const Mat3& R_d, const Mat3& R0,
                                       const Vec3& Omega0, double dt, double duration) {
  IsolationResult res;
  const CertificateReport rep = compute_constants(ci);
  res.beta_bar = rep.beta_bar;
  AttitudeFilterState afs;
  afs.R_d = R_d;
  MultirotorState s;
  s.R = R0;
  s.Omega = Omega0;
  const so3::AttitudeError e0 = so3::config_error(R0, R_d);
  const double eo0 = so3::angular_velocity_error(R0, Omega0, R_d, afs.Omega_d).squaredNorm();
  res.in_region = e0.psi < rep.roa_psi0_max && eo0 < rep.roa_eomega_coeff * (2.0 - e0.psi);

  const double V0 = lyapunov_v2(R0, Omega0, afs, ci.vehicle.J, ci.ctrl.k_R, ci.c1);
  std::vector<std::pair<double, double>> win;
  res.psi_stayed_below_2 = true;
  const long n = static_cast<long>(std::llround(duration / dt));
  for (long i = 0; i <= n; ++i) {
    const double t = i * dt;
    const so3::AttitudeError e = so3::config_error(s.R, R_d);
    res.max_psi = std::max(res.max_psi, e.psi);
    if (!(e.psi < 2.0)) res.psi_stayed_below_2 = false;
    const double V2 = lyapunov_v2(s.R, s.Omega, afs, ci.vehicle.J, ci.ctrl.k_R, ci.c1);
    // Post-transient window: after a 1e-2 drop, before round-off dominates.
    if (V2 < 1e-2 * V0 && V2 > 1e-12 * V0) win.emplace_back(t, std::log(V2));
    if (i == n) break;
    ControlInput u;
    u.f = ci.vehicle.m * ci.vehicle.g;
    u.M = moment(s, afs, Vec3::Zero(), ci.vehicle, ci.ctrl);
    s = step(s, u, ci.vehicle, dt);
  }
  res.window_points = static_cast<int>(win.size());
  if (win.size() >= 2) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (const auto& [t, y] : win) {
      st += t;
      sy += y;
      stt += t * t;
      sty += t * y;
    }
    const double nn = static_cast<double>(win.size());
    res.slope = (nn * sty - st * sy) / (nn * stt - st * st);
    res.window_start = win.front().first;
    res.window_end = win.back().first;
  }
  return res;
}

}  // namespace geotrack
