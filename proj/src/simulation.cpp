#include "geotrack/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace geotrack {

const char* csv_header() {
  return "t,x1,x2,x3,v1,v2,v3,xd1,xd2,xd3,ex_norm,ealpha_norm,ef1,ef2,ef3,f,M1,M2,M3,psi_R_Rd,psi_Rd_Rc,"
         "eomega_norm,g1_1,g1_2,g1_3,V2,V3,V4,V,e_norm_sq,bound_DlamV,viol_count";
}

void write_csv_row(std::ostream& os, const StepRecord& r) {
  char buf[64];
  bool first = true;
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!first) os << ',';
    os << buf;
    first = false;
  };
  auto put3 = [&](const Vec3& v) {
    put(v.x());
    put(v.y());
    put(v.z());
  };
  put(r.t);
  put3(r.x);
  put3(r.v);
  put3(r.x_d);
  put(r.ex_norm);
  put(r.ealpha_norm);
  put3(r.e_f);
  put(r.f);
  put3(r.M);
  put(r.psi_R_Rd);
  put(r.psi_Rd_Rc);
  put(r.eomega_norm);
  put3(r.g1);
  put(r.V2);
  put(r.V3);
  put(r.V4);
  put(r.V);
  put(r.e_norm_sq);
  put(r.bound_DlamV);
  os << ',' << r.viol_count << '\n';
}

std::string RunSummary::to_text() const {
  std::ostringstream os;
  os.precision(6);
  os << "steps                 " << steps << "\n";
  if (aborted) {
    os << "ABORTED at t = " << abort_time << ": " << abort_message << "\n";
  }
  os << "final ||e_x||         " << final_ex << "\n";
  os << "max ||e_x||           " << max_ex << "\n";
  os << "steady mean ||e_x||   " << steady_mean_ex << "\n";
  os << "max Psi(R, R_d)       " << max_psi_R_Rd << "\n";
  os << "max Psi(R_d, R_c)     " << max_psi_Rd_Rc << "\n";
  os << "min thrust            " << min_f << "\n";
  os << "max ||Omega_c||       " << max_omega_c << "\n";
  os << "attitude filter       " << (filter_implicit ? "implicit" : "explicit") << ", " << filter_substeps
     << " substeps/step\n";
  os << "monitor violations    " << violations << "\n";
  return os.str();
}

struct Simulation::Eval {
  TrajectorySample samp;
  OracleDerivatives oracle;
  PositionErrors pe;
  Vec3 e_alpha_true;
  Vec3 f_d;
  Mat3 R_c;
};

Simulation::Eval Simulation::evaluate(const MultirotorState& s, const PositionLoopState& pls,
                                      const EstimatorOutput& est, double t) const {
  Eval ev;
  ev.samp = traj_->sample(t);
  ev.oracle = oracle_derivatives(*traj_, t);
  const Vec3 v_d_used = sc_.sim.run_mode == RunMode::Oracle ? ev.oracle.x_d_dot : est.g_xd;
  ev.pe = position_errors(s, ev.samp.x_d, v_d_used, pls, sc_.ctrl);
  ev.e_alpha_true = position_errors(s, ev.samp.x_d, ev.oracle.x_d_dot, pls, sc_.ctrl).e_alpha;
  ev.f_d = virtual_input(ev.pe.e_x, pls.e_f, est.g1, sc_.vehicle, sc_.ctrl);
  ev.R_c = desired_attitude(ev.f_d, ev.samp.x_Bd, sc_.ctrl);
  return ev;
}

namespace {

MultirotorState initial_state(const Scenario& sc, const Trajectory& traj) {
  MultirotorState s;
  s.x = sc.initial.x0_at_reference ? traj.sample(0.0).x_d : sc.initial.x0;
  s.v = sc.initial.v0;
  s.R = so3::exp(sc.initial.attitude);
  s.Omega = sc.initial.Omega0;
  return s;
}

}  // namespace

Simulation::Simulation(Scenario sc)
    : sc_(std::move(sc)), traj_(sc_.make_trajectory()), ci_(sc_.certificate_inputs(*traj_)),
      rep_(), monitor_(ci_, rep_, sc_.sim.dt) {
  // V(0) for the e_alpha_bar consistency check comes from the actual start state.
  const MultirotorState s0 = initial_state(sc_, *traj_);
  const EstimatorStep e0 = estimator_advance(EstimatorState{}, sc_.est, traj_->sample(0.0).x_d, sc_.sim.dt);
  try {
    const Eval ev = evaluate(s0, PositionLoopState{}, e0.out, 0.0);
    AttitudeFilterState afs;
    afs.R_d = ev.R_c;
    ci_.V0 = lyapunov_eval({s0, afs, PositionLoopState{}, ev.R_c, ev.samp.x_d, ev.oracle.x_d_dot}, sc_.vehicle,
                           sc_.ctrl, ci_.c1)
                 .V;
  } catch (const Error&) {
    // Start state outside the domain; run() reports the same failure.
    ci_.V0 = std::numeric_limits<double>::infinity();
  }
  rep_ = compute_constants(ci_);
  monitor_ = Monitor(ci_, rep_, sc_.sim.dt);
}

RunSummary Simulation::run(const std::function<void(const StepRecord&)>& observer) {
  RunSummary sum;
  const double dt = sc_.sim.dt;
  const long N = static_cast<long>(std::llround(sc_.sim.duration / dt));
  const double steady_start = sc_.sim.steady_start >= 0.0 ? sc_.sim.steady_start : 0.5 * sc_.sim.duration;
  const double mg = sc_.vehicle.m * sc_.vehicle.g;
  monitor_ = Monitor(ci_, rep_, dt);

  MultirotorState s = initial_state(sc_, *traj_);
  PositionLoopState pls;
  EstimatorStep est = estimator_advance(EstimatorState{}, sc_.est, traj_->sample(0.0).x_d, dt);
  AttitudeFilterState afs;
  Mat3 R_c_prev = Mat3::Identity();
  double steady_sum = 0.0;
  long steady_n = 0;
  sum.min_f = std::numeric_limits<double>::infinity();

  for (long k = 0; k <= N; ++k) {
    const double t = k * dt;
    try {
      const Eval ev = evaluate(s, pls, est.out, t);
      if (k == 0) afs.R_d = ev.R_c;

      RcHold hold;
      hold.R_c = ev.R_c;
      Vec3 omega_c = Vec3::Zero();
      if (k > 0) {
        omega_c = omega_c_diagnostic(R_c_prev, ev.R_c, dt);
        if (sc_.sim.rc_hold == RcHoldMode::FirstOrder) hold.omega = omega_c;
      }
      const AttitudeFilterStep fs = attitude_filter_advance(afs, hold, sc_.ctrl, dt);
      sum.filter_substeps = fs.substeps;
      sum.filter_implicit = fs.implicit;

      ControlInput u;
      u.M = moment(s, afs, fs.Omega_d_dot, sc_.vehicle, sc_.ctrl);
      u.f = thrust(ev.f_d, ev.R_c, s.R, sc_.sim.thrust_strategy);

      const so3::AttitudeError ed = so3::config_error(s.R, afs.R_d);
      const so3::AttitudeError edc = so3::config_error(afs.R_d, ev.R_c);
      const LyapunovValues lv = lyapunov_eval({s, afs, pls, ev.R_c, ev.samp.x_d, ev.oracle.x_d_dot}, sc_.vehicle,
                                              sc_.ctrl, ci_.c1);

      if (sc_.sim.monitors) {
        MonitorSample ms;
        ms.t = t;
        ms.f_d = ev.f_d;
        ms.f = u.f;
        ms.R = s.R;
        ms.e_Rdc = edc.e_R;
        ms.e_Rd = ed.e_R;
        ms.psi_R_Rd = ed.psi;
        ms.psi_Rd_Rc = edc.psi;
        ms.g1 = est.out.g1;
        ms.g_xd = est.out.g_xd;
        ms.g_vd = est.out.g_vd;
        ms.projection_active = est.out.projection_active;
        ms.g1_correction = est.out.phi - projection_rate(est.out.g1, est.out.phi, sc_.est);
        ms.oracle = ev.oracle;
        ms.V = lv.V;
        ms.e_norm_sq = lv.e_norm_sq;
        ms.e_alpha_norm = ev.e_alpha_true.norm();
        ms.has_omega_c = k > 0;
        ms.omega_c = omega_c;
        monitor_.observe(ms);
      }

      StepRecord r;
      r.t = t;
      r.x = s.x;
      r.v = s.v;
      r.x_d = ev.samp.x_d;
      r.ex_norm = ev.pe.e_x.norm();
      r.ealpha_norm = ev.pe.e_alpha.norm();
      r.e_f = pls.e_f;
      r.f = u.f;
      r.M = u.M;
      r.psi_R_Rd = ed.psi;
      r.psi_Rd_Rc = edc.psi;
      r.eomega_norm = so3::angular_velocity_error(s.R, s.Omega, afs.R_d, afs.Omega_d).norm();
      r.g1 = est.out.g1;
      r.V2 = lv.V2;
      r.V3 = lv.V3;
      r.V4 = lv.V4;
      r.V = lv.V;
      r.e_norm_sq = lv.e_norm_sq;
      r.bound_DlamV = rep_.ultimate_bound;
      r.viol_count = monitor_.total_violations();
      r.f_d = ev.f_d;
      r.omega_c_norm = omega_c.norm();
      if (observer) observer(r);

      sum.steps = k + 1;
      sum.final_ex = r.ex_norm;
      sum.max_ex = std::max(sum.max_ex, r.ex_norm);
      if (t >= steady_start) {
        steady_sum += r.ex_norm;
        ++steady_n;
      }
      sum.max_psi_R_Rd = std::max(sum.max_psi_R_Rd, ed.psi);
      sum.max_psi_Rd_Rc = std::max(sum.max_psi_Rd_Rc, edc.psi);
      sum.min_f = std::min(sum.min_f, u.f);
      sum.max_abs_f_minus_mg = std::max(sum.max_abs_f_minus_mg, std::abs(u.f - mg));
      sum.max_omega_c = std::max(sum.max_omega_c, r.omega_c_norm);
      if (k == N) break;

      s = step(s, u, sc_.vehicle, dt);
      pls = ef_advance(pls, ev.pe.e_alpha, ev.pe.e_x, sc_.ctrl, dt);
      afs = fs.state;
      est = estimator_advance(est.state, sc_.est, traj_->sample(t + dt).x_d, dt);
      R_c_prev = ev.R_c;
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::NonFinite:
        case ErrorKind::NearAntipodal:
        case ErrorKind::HeadingSingular:
        case ErrorKind::ZeroThrustDirection:
          sum.aborted = true;
          sum.abort_kind = e.kind();
          sum.abort_message = e.what();
          sum.abort_time = t;
          break;
        default:
          throw;
      }
      break;
    }
  }
  sum.steady_mean_ex = steady_n ? steady_sum / steady_n : 0.0;
  sum.violations = monitor_.total_violations();
  return sum;
}

}  // namespace geotrack
