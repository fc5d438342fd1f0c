#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

#include "geotrack/analysis.hpp"
#include "geotrack/errors.hpp"
#include "geotrack/scenario.hpp"

namespace geotrack {

// One CSV row.
struct StepRecord {
  double t = 0.0;
  Vec3 x, v, x_d;
  double ex_norm = 0.0, ealpha_norm = 0.0;
  Vec3 e_f;
  double f = 0.0;
  Vec3 M;
  double psi_R_Rd = 0.0, psi_Rd_Rc = 0.0, eomega_norm = 0.0;
  Vec3 g1;
  double V2 = 0.0, V3 = 0.0, V4 = 0.0, V = 0.0, e_norm_sq = 0.0;
  double bound_DlamV = 0.0;
  long viol_count = 0;  // cumulative
  // not written to CSV
  Vec3 f_d;
  double omega_c_norm = 0.0;
};

const char* csv_header();
void write_csv_row(std::ostream& os, const StepRecord& r);

struct RunSummary {
  long steps = 0;
  bool aborted = false;
  std::optional<ErrorKind> abort_kind;
  std::string abort_message;
  double abort_time = 0.0;
  double final_ex = 0.0;
  double max_ex = 0.0;
  double steady_mean_ex = 0.0;
  double max_psi_R_Rd = 0.0;
  double max_psi_Rd_Rc = 0.0;
  double min_f = 0.0;
  double max_abs_f_minus_mg = 0.0;
  double max_omega_c = 0.0;
  long violations = 0;
  long filter_substeps = 0;
  bool filter_implicit = false;

  std::string to_text() const;
};

class Simulation {
 public:
  explicit Simulation(Scenario sc);

  const Scenario& scenario() const { return sc_; }
  const Trajectory& trajectory() const { return *traj_; }
  const CertificateInputs& certificate_inputs() const { return ci_; }
  const CertificateReport& certificate() const { return rep_; }
  const Monitor& monitor() const { return monitor_; }

  // Runs to the configured duration. Numeric failures end the run early and
  // are reported in the summary rather than thrown.
  RunSummary run(const std::function<void(const StepRecord&)>& observer = {});

 private:
  struct Eval;
  Eval evaluate(const MultirotorState& s, const PositionLoopState& pls, const EstimatorOutput& est,
                double t) const;

  Scenario sc_;
  std::unique_ptr<Trajectory> traj_;
  CertificateInputs ci_;
  CertificateReport rep_;
  Monitor monitor_;
};

}  // namespace geotrack
