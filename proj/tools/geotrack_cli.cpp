// geotrack: simulate, certify and audit the geometric tracking controller.
//
// exit codes: 0 ok, 1 config/io error, 2 numeric abort, 3 monitor violations,
//             4 gain conditions fail, 5 negative lemma slack

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "geotrack/analysis.hpp"
#include "geotrack/controller.hpp"
#include "geotrack/errors.hpp"
#include "geotrack/scenario.hpp"
#include "geotrack/simulation.hpp"

using namespace geotrack;

namespace {

enum Exit { kOk = 0, kConfig = 1, kAbort = 2, kViolations = 3, kGainsFail = 4, kLemmaSlack = 5 };

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  return f;
}

void print_certificate_brief(const CertificateReport& rep) {
  if (rep.all_pass()) {
    std::cout << "certificate: all gain conditions pass (D/lambda_V = " << rep.ultimate_bound << ")\n";
    return;
  }
  std::cout << "certificate WARNING: failing conditions:";
  for (const auto& id : rep.failing()) std::cout << ' ' << id;
  std::cout << "\n";
}

int cmd_simulate(const std::string& config, const std::string& out) {
  Simulation sim(Scenario::from_file(config));
  print_certificate_brief(sim.certificate());
  std::ofstream csv = open_out(out);
  csv << csv_header() << '\n';
  const RunSummary sum = sim.run([&](const StepRecord& r) { write_csv_row(csv, r); });
  std::cout << sum.to_text();
  if (sim.scenario().sim.monitors) std::cout << sim.monitor().report();
  if (sum.aborted) return kAbort;
  if (sim.scenario().sim.monitors && sum.violations > 0) return kViolations;
  return kOk;
}

int cmd_check_gains(const std::string& config) {
  const Scenario sc = Scenario::from_file(config);
  // Simulation works out V(0) from the start state for the e_alpha_bar check.
  const Simulation sim(sc);
  const CertificateReport& rep = sim.certificate();
  std::cout << rep.to_table();
  if (rep.all_pass()) {
    std::cout << "all gain conditions satisfied\n";
    return kOk;
  }
  for (const auto& c : rep.conditions) {
    if (!c.pass) std::cout << "failing condition: " << c.id << "  (" << c.statement << ")\n";
  }
  return kGainsFail;
}

int cmd_thrust_sweep(const std::string& out) {
  std::ofstream csv = open_out(out);
  csv << "theta_deg,lee_ratio,kar_ratio,proposed_ratio\n";
  const Vec3 f_d = e3();
  char buf[128];
  for (int deg = 0; deg <= 180; ++deg) {
    const double th = deg * std::numbers::pi / 180.0;
    const Mat3 R = so3::exp(Vec3(th, 0.0, 0.0));
    const Mat3 R_c = Mat3::Identity();
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", deg, thrust(f_d, R_c, R, ThrustStrategy::Lee2010),
                  thrust(f_d, R_c, R, ThrustStrategy::KarMagnitude),
                  thrust(f_d, R_c, R, ThrustStrategy::ProposedHalfAngle));
    csv << buf;
  }
  if (!csv) throw Error(ErrorKind::IoError, "write failed for '" + out + "'");
  return kOk;
}

int cmd_lemma_audit(const std::string& config, const std::string& out) {
  Scenario sc = Scenario::from_file(config);
  if (sc.sim.run_mode != RunMode::Oracle) {
    throw Error(ErrorKind::ConfigError, "lemma-audit needs run_mode = \"oracle\" (filter errors use true derivatives)");
  }
  sc.sim.monitors = true;
  Simulation sim(sc);
  const RunSummary sum = sim.run();
  std::ostringstream rep;
  rep << std::setprecision(10);
  bool all_ok = true;
  for (const auto& id : Monitor::lemma_ids()) {
    const CheckStats& s = sim.monitor().stats().at(id);
    const bool ok = s.min_slack >= -Monitor::kTolerance;
    all_ok = all_ok && ok;
    rep << id << " = " << s.min_slack << "   # " << (ok ? "ok" : "NEGATIVE") << ", worst at t = " << s.t_min << "\n";
  }
  rep << "aborted = " << (sum.aborted ? "true" : "false") << "\n";
  std::ofstream f = open_out(out);
  f << rep.str();
  std::cout << rep.str();
  if (sum.aborted) {
    std::cout << sum.abort_message << "\n";
    return kAbort;
  }
  return all_ok ? kOk : kLemmaSlack;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric multirotor tracking controller: simulation and certification"};
  app.require_subcommand(1);
  std::string config, out;

  auto* sim = app.add_subcommand("simulate", "run a scenario and write per-step CSV telemetry");
  sim->add_option("--config", config, "scenario file")->required();
  sim->add_option("--out", out, "CSV output path")->required();

  auto* chk = app.add_subcommand("check-gains", "print the certificate and test every gain condition");
  chk->add_option("--config", config, "scenario file")->required();

  auto* sweep = app.add_subcommand("thrust-sweep", "thrust ratio of each strategy versus tilt angle");
  sweep->add_option("--out", out, "CSV output path")->required();

  auto* audit = app.add_subcommand("lemma-audit", "minimum slack of each lemma bound along a run");
  audit->add_option("--config", config, "scenario file")->required();
  audit->add_option("--out", out, "report output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config, out);
    if (chk->parsed()) return cmd_check_gains(config);
    if (sweep->parsed()) return cmd_thrust_sweep(out);
    if (audit->parsed()) return cmd_lemma_audit(config, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::NonFinite:
      case ErrorKind::NearAntipodal:
      case ErrorKind::HeadingSingular:
      case ErrorKind::ZeroThrustDirection:
        return kAbort;
      default:
        return kConfig;
    }
  }
  return kConfig;
}
