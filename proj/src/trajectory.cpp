#include "geotrack/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "geotrack/errors.hpp"

namespace geotrack {

TrajectorySample Trajectory::sample(double t) const {
  const Full f = evaluate(t);
  TrajectorySample s;
  s.t = t;
  s.x_d = f.p[0];
  s.x_Bd = Vec3(std::cos(f.psi[0]), std::sin(f.psi[0]), 0.0);
  return s;
}

OracleDerivatives oracle_derivatives(const Trajectory& traj, double t) {
  const Trajectory::Full f = traj.evaluate(t);
  OracleDerivatives o;
  o.x_d_dot = f.p[1];
  o.x_d_ddot = f.p[2];
  o.x_d_dddot = f.p[3];
  o.x_d_dddd = f.p[4];
  const double c = std::cos(f.psi[0]), s = std::sin(f.psi[0]);
  const double w = f.psi[1], a = f.psi[2];
  o.x_Bd_dot = Vec3(-s * w, c * w, 0.0);
  o.x_Bd_ddot = Vec3(-c * w * w - s * a, -s * w * w + c * a, 0.0);
  return o;
}

namespace {

double get(const ParamMap& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void check_keys(const std::string& kind, const ParamMap& p, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : p) {
    if (!allowed.count(k)) throw Error(ErrorKind::BadParams, kind + ": unknown parameter '" + k + "'");
    if (!std::isfinite(v)) throw Error(ErrorKind::BadParams, kind + ": parameter '" + k + "' is not finite");
  }
}

class Hover final : public Trajectory {
 public:
  Hover(Vec3 p, double psi0) : p_(p), psi0_(psi0) {}
  std::string kind() const override { return "hover"; }

 protected:
  Full evaluate(double) const override {
    Full f{};
    f.p[0] = p_;
    for (int n = 1; n < 5; ++n) f.p[n].setZero();
    f.psi[0] = psi0_;
    f.psi[1] = f.psi[2] = 0.0;
    return f;
  }

 private:
  Vec3 p_;
  double psi0_;
};

class Circle final : public Trajectory {
 public:
  Circle(double r, double w, Vec3 c, double psi0, double wpsi) : r_(r), w_(w), c_(c), psi0_(psi0), wpsi_(wpsi) {
    for (int n = 1; n <= 4; ++n) bounds_.h[n - 1] = r * std::pow(std::abs(w), n);
    bounds_.h[4] = std::abs(wpsi);
    bounds_.h[5] = wpsi * wpsi;
  }
  std::string kind() const override { return "circle"; }

 protected:
  Full evaluate(double t) const override {
    Full f{};
    const double ph = w_ * t;
    f.p[0] = c_ + Vec3(r_ * std::cos(ph), r_ * std::sin(ph), 0.0);
    double wn = 1.0;
    for (int n = 1; n < 5; ++n) {
      wn *= w_;
      const double a = ph + n * std::numbers::pi / 2.0;
      f.p[n] = Vec3(r_ * wn * std::cos(a), r_ * wn * std::sin(a), 0.0);
    }
    f.psi[0] = psi0_ + wpsi_ * t;
    f.psi[1] = wpsi_;
    f.psi[2] = 0.0;
    return f;
  }

 private:
  double r_, w_;
  Vec3 c_;
  double psi0_, wpsi_;
};

// Figure-eight: x = a cos(wt), y = (a/2) sin(2wt).
class Lemniscate final : public Trajectory {
 public:
  Lemniscate(double a, double w, Vec3 c, double psi0, double wpsi) : a_(a), w_(w), c_(c), psi0_(psi0), wpsi_(wpsi) {
    for (int n = 1; n <= 4; ++n) bounds_.h[n - 1] = derivative_sup(n);
    bounds_.h[4] = std::abs(wpsi);
    bounds_.h[5] = wpsi * wpsi;
  }
  std::string kind() const override { return "lemniscate"; }

 protected:
  Full evaluate(double t) const override {
    Full f{};
    for (int n = 0; n < 5; ++n) f.p[n] = nth(n, t);
    f.p[0] += c_;
    f.psi[0] = psi0_ + wpsi_ * t;
    f.psi[1] = wpsi_;
    f.psi[2] = 0.0;
    return f;
  }

 private:
  Vec3 nth(int n, double t) const {
    const double s = n * std::numbers::pi / 2.0;
    return Vec3(a_ * std::pow(w_, n) * std::cos(w_ * t + s),
                0.5 * a_ * std::pow(2.0 * w_, n) * std::sin(2.0 * w_ * t + s), 0.0);
  }

  // Dense scan over one period, then golden-section refinement around the best cell.
  double derivative_sup(int n) const {
    if (w_ == 0.0 || a_ == 0.0) return 0.0;
    const double period = 2.0 * std::numbers::pi / std::abs(w_);
    const int N = 20000;
    const double dtg = period / N;
    int best = 0;
    double bestv = -1.0;
    for (int i = 0; i < N; ++i) {
      const double v = nth(n, i * dtg).norm();
      if (v > bestv) { bestv = v; best = i; }
    }
    double lo = (best - 1) * dtg, hi = (best + 1) * dtg;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 100; ++it) {
      const double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
      if (nth(n, m1).norm() < nth(n, m2).norm()) lo = m1; else hi = m2;
    }
    return std::max(bestv, nth(n, 0.5 * (lo + hi)).norm());
  }

  double a_, w_;
  Vec3 c_;
  double psi0_, wpsi_;
};

// Piecewise-constant jump from p to q at t_step. Sampleable, but its
// derivatives are unbounded at the jump.
class Step final : public Trajectory {
 public:
  Step(Vec3 p, Vec3 q, double ts, double psi0) : p_(p), q_(q), ts_(ts), psi0_(psi0) {
    bounds_.bounded = false;
    bounds_.h.fill(std::numeric_limits<double>::infinity());
  }
  std::string kind() const override { return "step"; }

 protected:
  Full evaluate(double t) const override {
    Full f{};
    f.p[0] = t < ts_ ? p_ : q_;
    for (int n = 1; n < 5; ++n) f.p[n].setZero();
    f.psi[0] = psi0_;
    f.psi[1] = f.psi[2] = 0.0;
    return f;
  }

 private:
  Vec3 p_, q_;
  double ts_, psi0_;
};

}  // namespace

std::unique_ptr<Trajectory> builtin(const std::string& kind, const ParamMap& p) {
  if (kind == "hover") {
    check_keys(kind, p, {"px", "py", "pz", "psi0"});
    return std::make_unique<Hover>(Vec3(get(p, "px", 0), get(p, "py", 0), get(p, "pz", 0)), get(p, "psi0", 0));
  }
  if (kind == "circle" || kind == "lemniscate") {
    const std::string size_key = kind == "circle" ? "r" : "a";
    check_keys(kind, p, {size_key, "omega", "cx", "cy", "cz", "psi0", "heading_rate"});
    if (!p.count(size_key) || !p.count("omega")) {
      throw Error(ErrorKind::BadParams, kind + ": '" + size_key + "' and 'omega' are required");
    }
    const double size = p.at(size_key), w = p.at("omega");
    if (!(size > 0.0)) throw Error(ErrorKind::BadParams, kind + ": size must be positive");
    const Vec3 c(get(p, "cx", 0), get(p, "cy", 0), get(p, "cz", 0));
    if (kind == "circle") {
      return std::make_unique<Circle>(size, w, c, get(p, "psi0", 0), get(p, "heading_rate", w));
    }
    return std::make_unique<Lemniscate>(size, w, c, get(p, "psi0", 0), get(p, "heading_rate", 0));
  }
  if (kind == "step") {
    check_keys(kind, p, {"px", "py", "pz", "qx", "qy", "qz", "t_step", "psi0"});
    const double ts = get(p, "t_step", 1.0);
    if (!(ts >= 0.0)) throw Error(ErrorKind::BadParams, "step: t_step must be non-negative");
    return std::make_unique<Step>(Vec3(get(p, "px", 0), get(p, "py", 0), get(p, "pz", 0)),
                                  Vec3(get(p, "qx", 1), get(p, "qy", 0), get(p, "qz", 0)), ts,
                                  get(p, "psi0", 0));
  }
  throw Error(ErrorKind::BadParams, "unknown trajectory kind '" + kind + "'");
}

}  // namespace geotrack
