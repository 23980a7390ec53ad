#include "pacb/app/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "pacb/app/config.hpp"
#include "pacb/app/csv.hpp"
#include "pacb/app/svg_plot.hpp"
#include "pacb/app/sweep.hpp"
#include "pacb/detection.hpp"
#include "pacb/oracle.hpp"
#include "pacb/units.hpp"

namespace pacb::app {
namespace {

namespace fs = std::filesystem;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << text;
  if (!f.flush()) throw IoError("write to '" + path.string() + "' failed");
}

Config load(const GlobalOptions& g) {
  Config c = g.config_path.empty() ? Config{} : parse_config(read_file(g.config_path), g.config_path);
  if (g.seed) c.seed = *g.seed;
  return c;
}

// Creates the directory and proves it accepts files before anything is computed.
fs::path prepare_out_dir(const std::string& dir) {
  const fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw IoError("cannot create output directory '" + dir + "'");
  const fs::path probe = p / ".pacb-write-probe";
  {
    std::ofstream f(probe, std::ios::binary | std::ios::trunc);
    if (!f || !(f << 'x') || !f.flush()) throw IoError("output directory '" + dir + "' is not writable");
  }
  fs::remove(probe, ec);
  return p;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::invalid_argument& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

const char* pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

int cmd_solve(const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config cfg = load(g);
    const Problem problem = to_problem(cfg);
    const fs::path dir = g.out.empty() ? fs::path{} : prepare_out_dir(g.out);
    const SolveResult r = solve_ao(problem, to_solver_options(cfg));

    if (!g.quiet) {
      if (r.feasible) {
        out << "p0_opt_dbm  " << format_double(units::watts_to_dbm(r.p0_opt)) << '\n'
            << "tpa_x_m     " << format_double(r.tpa_x_opt) << '\n'
            << "rate_bps    " << format_double(r.rate) << '\n';
      } else {
        out << "infeasible: no power/position pair meets the reliability and covertness constraints\n";
      }
      out << "binding     " << to_string(r.binding_constraint) << '\n'
          << "iterations  " << r.iterations << '\n';
    }
    if (!dir.empty()) {
      std::string csv = "p0_opt_dbm,tpa_x_m,rate_bps,feasible,binding,iterations\r\n";
      csv += csv_line({r.feasible ? format_double(units::watts_to_dbm(r.p0_opt)) : std::string(),
                       format_double(r.tpa_x_opt), format_double(r.rate), r.feasible ? "1" : "0",
                       std::string(to_string(r.binding_constraint)), std::to_string(r.iterations)});
      write_file(dir / "solve.csv", csv);
    }
    return r.feasible ? kExitOk : kExitInfeasible;
  });
}

int cmd_sweep(const GlobalOptions& g, const std::string& sweep_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config cfg = load(g);
    const SweepSpec spec = parse_sweep(read_file(sweep_path), sweep_path);
    const fs::path dir = prepare_out_dir(g.out.empty() ? "." : g.out);

    const std::string csv = sweep_csv(run_sweep(cfg, spec));
    PlotLabels labels{spec.title.empty() ? spec.name : spec.title, axis_label(spec.variable), {}};
    for (const CurveSpec& c : spec.curves) labels.curve_labels.push_back(c.label);
    const fs::path csv_path = dir / (spec.name + ".csv");
    const fs::path svg_path = dir / (spec.name + ".svg");
    write_file(csv_path, csv);
    write_file(svg_path, plot_sweep_svg(csv, labels));
    if (!g.quiet) out << "wrote " << csv_path.string() << " and " << svg_path.string() << '\n';
    return kExitOk;
  });
}

int cmd_verify(const GlobalOptions& g, const VerifyOptions& v, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config cfg = load(g);
    const Problem problem = to_problem(cfg);
    SolverOptions options = to_solver_options(cfg);
    options.delta3 = v.delta3;
    const std::uint64_t n_mc = v.mc_samples.value_or(cfg.mc_samples);
    if (n_mc == 0) throw ConfigError("Monte-Carlo sample count must be positive", "mc_samples");
    const fs::path dir = g.out.empty() ? fs::path{} : prepare_out_dir(g.out);

    std::ostringstream report;
    bool all_pass = true;

    // Detection oracles at the AO operating point (P_max at L/4 if infeasible).
    const SolveResult ao = solve_ao(problem, options);
    const double p0 = ao.feasible ? ao.p0_opt : problem.power.p_max;
    const double x = ao.feasible ? ao.tpa_x_opt : problem.scenario.room.length / 4.0;
    const DetectionReport det = analyze_detection(p0, problem.scenario.with_tpa_x(x), problem.power,
                                                  problem.rf, problem.noise, problem.eve);

    const auto thr = oracle::verify_threshold(det.delta1, det.delta2, problem.noise,
                                           oracle::threshold_grid(det.delta1, det.delta2, problem.noise));
    all_pass &= thr.pass;
    report << "threshold " << pass_fail(thr.pass) << "  dep gap " << format_double(thr.dep.abs_gap)
           << ", threshold gap " << format_double(thr.threshold.abs_gap) << " W (step "
           << format_double(thr.threshold.grid_resolution) << " W)\n";

    const auto mc = oracle::compare_monte_carlo(det.threshold_opt, det.delta1, det.delta2, problem.noise, n_mc,
                                                cfg.seed);
    all_pass &= mc.pass;
    report << "mc        " << pass_fail(mc.pass) << "  n " << n_mc << ", false-alarm gap "
           << format_double(mc.false_alarm.abs_gap) << ", miss gap " << format_double(mc.miss.abs_gap)
           << " (tolerance " << format_double(mc.tolerance) << ")\n";

    const auto joint = oracle::verify_joint(problem, options);
    all_pass &= joint.verdict.pass;
    report << "joint     " << pass_fail(joint.verdict.pass) << "  AO " << format_double(joint.ao.rate) << " bit/s, grid "
           << format_double(joint.verdict.grid_value) << " bit/s; " << joint.verdict.detail << '\n';

    const auto d3 = oracle::verify_delta3_variants(problem, options);
    all_pass &= d3.pass;
    for (Delta3Form f : {Delta3Form::derived, Delta3Form::printed}) {
      const auto& var = d3.variant(f);
      report << "  offset " << to_string(f) << ": boundary " << (var.reproduces_boundary ? "reproduced" : "MISMATCH")
             << " (snr gap " << format_double(var.snr.max_gap) << " m, covert gap "
             << format_double(var.covert.max_gap) << " m)\n";
    }
    report << "offset    " << pass_fail(d3.pass) << "  active form " << to_string(d3.active) << ", grid step "
           << format_double(d3.grid_step) << " m\n";

    report << (all_pass ? "all oracles passed\n" : "oracle failure\n");
    if (!g.quiet) out << report.str();
    if (!dir.empty()) write_file(dir / "verify.txt", report.str());
    return all_pass ? kExitOk : kExitOracleFailure;
  });
}

int cmd_detect(const GlobalOptions& g, const DetectOptions& d, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config cfg = load(g);
    const Problem problem = to_problem(cfg);
    if (d.points < 2) throw ConfigError("detect needs at least two threshold points");
    const fs::path dir = g.out.empty() ? fs::path{} : prepare_out_dir(g.out);

    double p0 = problem.power.p_max;
    double x = problem.scenario.room.length / 4.0;
    if (!d.p0_dbm || !d.tpa_x) {
      const SolveResult ao = solve_ao(problem, to_solver_options(cfg));
      if (ao.feasible) {
        p0 = ao.p0_opt;
        x = ao.tpa_x_opt;
      }
    }
    if (d.p0_dbm) p0 = units::dbm_to_watts(*d.p0_dbm);
    if (d.tpa_x) x = *d.tpa_x;
    const Scenario scenario = problem.scenario.with_tpa_x(x);
    scenario.validate();
    const DetectionReport det =
        analyze_detection(p0, scenario, problem.power, problem.rf, problem.noise, problem.eve);

    const double lo = problem.noise.x_lo() + det.delta1;
    const double hi = problem.noise.x_hi() + det.delta2;
    const double pad = 0.05 * (hi - lo);
    std::string csv = "threshold_w,p_false_alarm,p_miss,p_total\r\n";
    for (std::size_t i = 0; i < d.points; ++i) {
      const double t = (lo - pad) + (hi - lo + 2.0 * pad) * static_cast<double>(i) / static_cast<double>(d.points - 1);
      csv += csv_line({format_double(t), format_double(dep_false_alarm(t, det.delta1, problem.noise)),
                       format_double(dep_miss(t, det.delta2, problem.noise)),
                       format_double(dep_total(t, det.delta1, det.delta2, problem.noise))});
    }
    if (!dir.empty()) {
      write_file(dir / "detect.csv", csv);
      if (!g.quiet) out << "wrote " << (dir / "detect.csv").string() << '\n';
    } else if (!g.quiet) {
      out << csv;
    }
    if (!g.quiet) {
      err << "optimal threshold " << format_double(det.threshold_opt) << " W, minimum DEP "
          << format_double(det.dep_min) << ", worst-case DEP " << format_double(det.dep_worst_case) << '\n';
    }
    return kExitOk;
  });
}

}  // namespace pacb::app
