#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>

#include "geotrack/so3.hpp"

namespace geotrack {

// What the controller is allowed to see: position and heading, nothing else.
struct TrajectorySample {
  double t = 0.0;
  Vec3 x_d = Vec3::Zero();
  Vec3 x_Bd = Vec3::UnitX();
};

// True derivatives, for monitors and oracle-mode velocity feedback only.
struct OracleDerivatives {
  Vec3 x_d_dot = Vec3::Zero();
  Vec3 x_d_ddot = Vec3::Zero();
  Vec3 x_d_dddot = Vec3::Zero();
  Vec3 x_d_dddd = Vec3::Zero();
  Vec3 x_Bd_dot = Vec3::Zero();
  Vec3 x_Bd_ddot = Vec3::Zero();
};

// h[0..3]: sup norms of d^n x_d / dt^n for n = 1..4.
// h[4], h[5]: sup norms of the first two heading derivatives.
struct TrajectoryBounds {
  std::array<double, 6> h{};
  bool bounded = true;

  double h1() const { return h[0]; }
  double h2() const { return h[1]; }
  double h3() const { return h[2]; }
  double h4() const { return h[3]; }
  double h5() const { return h[4]; }
  double h6() const { return h[5]; }
};

class Trajectory {
 public:
  virtual ~Trajectory() = default;

  virtual std::string kind() const = 0;
  TrajectorySample sample(double t) const;
  const TrajectoryBounds& bounds() const { return bounds_; }

 protected:
  struct Full {
    Vec3 p[5];        // x_d and its first four derivatives
    double psi[3];    // heading angle and its first two derivatives
  };
  virtual Full evaluate(double t) const = 0;

  TrajectoryBounds bounds_;

  friend OracleDerivatives oracle_derivatives(const Trajectory& traj, double t);
};

// Separate accessor so controller code paths never touch the derivatives.
OracleDerivatives oracle_derivatives(const Trajectory& traj, double t);

using ParamMap = std::map<std::string, double>;

// Kinds: hover (px, py, pz, psi0), circle (r, omega, cx, cy, cz, psi0,
// heading_rate defaulting to omega), lemniscate (a, omega, cx, cy, cz, psi0,
// heading_rate defaulting to 0), step (px, py, pz, qx, qy, qz, t_step, psi0).
// Throws Error(BadParams) for unknown kinds, unknown keys or invalid values.
std::unique_ptr<Trajectory> builtin(const std::string& kind, const ParamMap& params);

}  // namespace geotrack
