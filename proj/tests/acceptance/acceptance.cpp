// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "pacb/app/commands.hpp"
#include "pacb/app/config.hpp"
#include "pacb/app/sweep.hpp"
#include "pacb/detection.hpp"
#include "pacb/oracle.hpp"
#include "pacb/units.hpp"

using namespace pacb;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = std::string(PACB_SOURCE_DIR) + "/configs/";

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& note) {
    if (!ok) {
      pass = false;
      notes.push_back(note);
    }
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

NoiseUncertainty random_model(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return NoiseUncertainty::from_db(units::dbm_to_watts(-100.0 + 20.0 * u(rng)), 0.5 + 5.5 * u(rng));
}

// 1. Closed-form threshold and minimum against a 10^6-point grid.
Outcome threshold_oracle() {
  Outcome o;
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_dep = 0.0, worst_steps = 0.0;
  for (int i = 0; i < 100; ++i) {
    const NoiseUncertainty m = random_model(rng);
    const double d1 = 5.0 * m.nominal() * u(rng);
    const double d2 = d1 + 1.2 * (m.x_hi() - m.x_lo()) * u(rng);
    const auto grid = oracle::threshold_grid(d1, d2, m, oracle::kThresholdPoints);
    const auto v = oracle::verify_threshold(d1, d2, m, grid);
    worst_dep = std::max(worst_dep, v.dep.abs_gap);
    worst_steps = std::max(worst_steps, v.threshold.abs_gap / grid.step());
    o.require(v.pass, "instance " + std::to_string(i) + ": dep gap " + fmt(v.dep.abs_gap) + ", threshold gap " +
                          fmt(v.threshold.abs_gap / grid.step()) + " steps");
  }
  o.summary = "100 instances, max |dP| " + fmt(worst_dep) + " (tol 1e-6), max |dGamma| " + fmt(worst_steps) +
              " grid steps (tol 1)";
  return o;
}

// 2. Monte-Carlo error rates against the closed forms.
Outcome monte_carlo() {
  Outcome o;
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const NoiseUncertainty m = random_model(rng);
    const double d1 = 3.0 * m.nominal() * u(rng);
    const double d2 = d1 + (m.x_hi() - m.x_lo()) * u(rng);
    const double lo = m.x_lo() + d1, hi = m.x_hi() + d2;
    const double threshold = lo + (hi - lo) * u(rng);
    const auto v = oracle::compare_monte_carlo(threshold, d1, d2, m, 1'000'000, 42 + i);
    const double gap = std::max(v.false_alarm.abs_gap, v.miss.abs_gap);
    worst = std::max(worst, gap);
    o.require(gap <= 0.005, "setting " + std::to_string(i) + ": gap " + fmt(gap));
  }
  o.summary = "20 settings x 10^6 draws, max gap " + fmt(worst) + " (tol 0.005)";
  return o;
}

// 3. Continuity at the four breakpoints and strict monotonicity inside the ramps.
Outcome continuity() {
  Outcome o;
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  bool monotone = true;
  for (int i = 0; i < 50; ++i) {
    const NoiseUncertainty m = random_model(rng);
    const double d1 = 3.0 * m.nominal() * u(rng);
    const double d2 = d1 + 0.95 * (m.x_hi() - m.x_lo()) * u(rng);
    const double h = 1e-12 * m.x_lo();
    for (double bp : {m.x_lo() + d1, m.x_hi() + d1, m.x_lo() + d2, m.x_hi() + d2}) {
      const double at = dep_total(bp, d1, d2, m);
      const double gap = std::max(std::abs(dep_total(bp - h, d1, d2, m) - at),
                                  std::abs(dep_total(bp + h, d1, d2, m) - at));
      worst = std::max(worst, gap);
      o.require(gap <= 1e-9, "instance " + std::to_string(i) + ": jump " + fmt(gap) + " at a breakpoint");
    }
    constexpr int n = 2000;
    double prev_fa = 2.0, prev_md = -1.0;
    for (int k = 1; k < n; ++k) {
      const double f = static_cast<double>(k) / n;
      const double fa = dep_false_alarm(m.x_lo() + d1 + f * (m.x_hi() - m.x_lo()), d1, m);
      const double md = dep_miss(m.x_lo() + d2 + f * (m.x_hi() - m.x_lo()), d2, m);
      monotone &= fa < prev_fa && md > prev_md;
      prev_fa = fa;
      prev_md = md;
    }
  }
  o.require(monotone, "false alarm not strictly decreasing or miss not strictly increasing on its ramp");
  o.summary = "50 instances, max breakpoint jump " + fmt(worst) + " (tol 1e-9), ramps strictly monotone: " +
              (monotone ? "yes" : "no");
  return o;
}

Problem random_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  app::Config c;
  c.d_b_e = 2.0 + 8.0 * u(rng);
  c.chi = 1.5 * u(rng);
  c.delta = 0.5 * u(rng);
  c.epsilon = 0.01 + 0.2 * u(rng);
  c.p_max = units::dbm_to_watts(30.0 + 20.0 * u(rng));
  c.sigma_p = units::dbm_to_watts(-120.0 + 8.0 * u(rng));
  c.sigma_e_nominal = units::dbm_to_watts(-95.0 + 10.0 * u(rng));
  c.waveguide_tx_y = -2.0 * u(rng);
  c.waveguide_rx_y = 2.0 * u(rng);
  c.bd_x = 2.0 + 16.0 * u(rng);
  c.eve_bearing_deg = u(rng) < 0.5 ? 0.0 : 180.0;
  if (*c.bd_x + (c.eve_bearing_deg == 0.0 ? c.d_b_e : -c.d_b_e) < 0.0 ||
      *c.bd_x + (c.eve_bearing_deg == 0.0 ? c.d_b_e : -c.d_b_e) > c.room_length) {
    c.eve_bearing_deg = 180.0 - c.eve_bearing_deg;
  }
  return app::to_problem(c);
}

// 4. AO against the 500 x 500 grid.
Outcome ao_vs_grid() {
  Outcome o;
  std::mt19937_64 rng(4004);
  int used = 0, tried = 0;
  double worst_excess = 0.0;
  auto check = [&](const std::string& name, const Problem& p) {
    const auto v = oracle::verify_joint(p);
    const double excess = v.grid_found_feasible ? (v.verdict.grid_value - v.ao.rate) / std::max(v.ao.rate, 1e-300) : 0.0;
    worst_excess = std::max(worst_excess, excess);
    o.require(v.verdict.pass, name + ": " + v.verdict.detail);
  };
  while (used < 20 && tried < 2000) {
    ++tried;
    Problem p;
    try {
      p = random_scenario(rng);
    } catch (const app::ConfigError&) {
      continue;
    }
    const auto probe = oracle::verify_joint(p);
    if (!probe.ao.feasible && !probe.grid_found_feasible) continue;
    ++used;
    check("random scenario " + std::to_string(used), p);
  }
  o.require(used == 20, "only " + std::to_string(used) + " feasible random scenarios found");
  for (const char* name : {"distance", "budget", "covertness"}) {
    check(name, app::to_problem(app::load_config(kConfigs + name + ".cfg")));
  }
  o.summary = std::to_string(used) + " random + 3 study scenarios, AO point feasible at 1e-9 rel, max grid-over-AO " +
              fmt(worst_excess) + " rel (tol 1e-9)";
  return o;
}

// 5. Offset adjudication.
Outcome offset_adjudication() {
  Outcome o;
  std::string gaps;
  for (const char* name : {"distance", "budget", "covertness"}) {
    const Problem p = app::to_problem(app::load_config(kConfigs + name + ".cfg"));
    const auto rec = oracle::verify_delta3_variants(p);
    o.require(rec.derived.reproduces_boundary, std::string(name) + ": derived form misses the grid boundary");
    o.require(!rec.printed.reproduces_boundary, std::string(name) + ": printed form also matches the grid boundary");
    gaps += std::string(gaps.empty() ? "" : "; ") + name + " derived " +
            fmt(std::max(rec.derived.snr.max_gap, rec.derived.covert.max_gap)) + " m vs printed " +
            fmt(std::max(rec.printed.snr.max_gap, rec.printed.covert.max_gap)) + " m, step " + fmt(rec.grid_step);
  }
  o.summary = "H = 3, y_b = 0: " + gaps;
  return o;
}

struct SweepRun {
  app::SweepSpec spec;
  std::vector<app::SweepRow> rows;

  const app::SweepRow& at(std::size_t curve, app::Algorithm a, std::size_t k) const {
    const std::size_t n = spec.values.size();
    const auto ai = static_cast<std::size_t>(std::find(std::begin(app::kAlgorithms), std::end(app::kAlgorithms), a) -
                                             std::begin(app::kAlgorithms));
    return rows[(curve * 4 + ai) * n + k];
  }
  double rate(std::size_t curve, app::Algorithm a, std::size_t k) const { return at(curve, a, k).result.rate; }
};

SweepRun run_study(const std::string& name) {
  SweepRun r;
  r.spec = app::load_sweep(kConfigs + name + ".sweep");
  r.rows = app::run_sweep(app::load_config(kConfigs + name + ".cfg"), r.spec);
  return r;
}

bool leq(double a, double b) { return a <= b * (1.0 + 1e-9) + 1e-9; }
bool same(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)) + 1e-9; }

// Curve `lo` lies on or below curve `hi` everywhere and strictly below somewhere.
bool below(const SweepRun& r, std::size_t lo, std::size_t hi) {
  bool strict = false;
  for (std::size_t k = 0; k < r.spec.values.size(); ++k) {
    const double a = r.rate(lo, app::Algorithm::ao, k), b = r.rate(hi, app::Algorithm::ao, k);
    if (!leq(a, b)) return false;
    strict |= a < b && !same(a, b);
  }
  return strict;
}

bool non_decreasing(const SweepRun& r, std::size_t curve) {
  for (std::size_t k = 1; k < r.spec.values.size(); ++k) {
    if (!leq(r.rate(curve, app::Algorithm::ao, k - 1), r.rate(curve, app::Algorithm::ao, k))) return false;
  }
  return true;
}

// 6. Directional claims about the three studies.
Outcome trends(const SweepRun& a, const SweepRun& b, const SweepRun& c) {
  Outcome o;
  using app::Algorithm;
  for (const SweepRun* r : {&a, &b, &c}) {
    o.require(r->spec.values.size() >= 10, r->spec.name + ": fewer than 10 sweep points");
  }

  // distance curves: 0 (chi 0, delta .1), 1 (0, .3), 2 (2, .1), 3 (2, .3)
  for (std::size_t cv = 0; cv < 4; ++cv) {
    o.require(non_decreasing(a, cv), "distance curve " + std::to_string(cv) + ": AO rate decreases with d_b_e");
  }
  o.require(below(a, 1, 0) && below(a, 3, 2), "distance: larger delta does not give a lower curve");
  o.require(below(a, 2, 0) && below(a, 3, 1), "distance: larger chi does not give a lower curve");
  std::size_t nonzero_l2 = 0;
  for (std::size_t cv = 0; cv < 4; ++cv) {
    for (std::size_t k = 0; k < a.spec.values.size(); ++k) nonzero_l2 += a.rate(cv, Algorithm::baseline_xL2, k) > 0.0;
  }
  o.require(nonzero_l2 == 0, "distance: baseline x = L/2 is not identically zero (" + std::to_string(nonzero_l2) + " of " +
                                 std::to_string(4 * a.spec.values.size()) +
                                 " points positive; it coincides with AO because the device sits at x = L/2)");
  for (std::size_t cv = 0; cv < 4; ++cv) {
    const std::size_t n = a.spec.values.size();
    bool plateau = same(a.rate(cv, Algorithm::baseline_xL4, n - 1), a.rate(cv, Algorithm::baseline_xL4, n - 2)) &&
                   same(a.rate(cv, Algorithm::baseline_xL4, n - 2), a.rate(cv, Algorithm::baseline_xL4, n - 3)) &&
                   a.rate(cv, Algorithm::baseline_xL4, n - 1) > 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      plateau &= leq(a.rate(cv, Algorithm::baseline_xL4, k), a.rate(cv, Algorithm::ao, k));
    }
    o.require(plateau, "distance curve " + std::to_string(cv) + ": baseline x = L/4 does not plateau at or below AO");
  }

  // budget curves: 0 (sigma_e -87), 1 (-90), 2 (-95)
  std::size_t binding_points = 0;
  for (std::size_t cv = 0; cv < 3; ++cv) {
    std::optional<double> capped;
    for (std::size_t k = 0; k < b.spec.values.size(); ++k) {
      const auto& res = b.at(cv, Algorithm::ao, k).result;
      if (!capped && res.feasible && res.binding_constraint == BindingConstraint::covertness) capped = res.rate;
      if (capped) {
        ++binding_points;
        o.require(same(res.rate, *capped), "budget curve " + std::to_string(cv) +
                                               ": AO rate changes after covertness binds");
      }
    }
  }
  o.require(binding_points > 0, "budget: covertness never binds");
  o.require(below(b, 1, 0) && below(b, 2, 1), "budget: larger nominal eavesdropper noise does not give a higher curve");

  // covertness curves: 0 (sigma_p -110), 1 (-116)
  o.require(non_decreasing(c, 0) && non_decreasing(c, 1), "covertness: AO rate decreases with epsilon");
  o.require(below(c, 0, 1), "covertness: sigma_p = -110 dBm curve is not below the -116 dBm curve");

  o.summary = (o.notes.empty() ? std::string("all directional claims hold")
                               : std::to_string(o.notes.size()) + " directional claim(s) fail") +
              " over " + std::to_string(a.spec.values.size()) + "/" + std::to_string(b.spec.values.size()) + "/" +
              std::to_string(c.spec.values.size()) + " sweep points";
  return o;
}

// 7. AO never loses to a fixed-position baseline.
Outcome restriction(const std::vector<const SweepRun*>& runs) {
  Outcome o;
  std::size_t points = 0;
  double worst = 0.0;
  for (const SweepRun* r : runs) {
    for (std::size_t cv = 0; cv < r->spec.curve_count(); ++cv) {
      for (std::size_t k = 0; k < r->spec.values.size(); ++k) {
        ++points;
        const double ao = r->rate(cv, app::Algorithm::ao, k);
        double best = 0.0;
        for (auto alg : {app::Algorithm::baseline_x0, app::Algorithm::baseline_xL4, app::Algorithm::baseline_xL2}) {
          best = std::max(best, r->rate(cv, alg, k));
        }
        if (ao > 0.0) worst = std::max(worst, (best - ao) / ao);
        o.require(best <= ao * (1.0 + 1e-9), r->spec.name + " curve " + std::to_string(cv) + " point " +
                                                 std::to_string(k) + ": baseline beats AO");
      }
    }
  }
  o.summary = std::to_string(points) + " sweep points, max (baseline - AO)/AO " + fmt(worst) + " (tol 1e-9)";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 8. Repeated sweeps produce byte-identical CSVs.
Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / ("pacb-acceptance-" + std::to_string(::getpid()));
  std::size_t bytes = 0;
  for (const char* name : {"distance", "budget", "covertness"}) {
    std::string first;
    for (int run = 0; run < 2; ++run) {
      app::GlobalOptions g;
      g.config_path = kConfigs + name + ".cfg";
      g.out = (root / ("run" + std::to_string(run))).string();
      g.quiet = true;
      std::ostringstream out, err;
      const int rc = app::cmd_sweep(g, kConfigs + name + ".sweep", out, err);
      o.require(rc == app::kExitOk, std::string(name) + ": sweep exited " + std::to_string(rc) + " " + err.str());
      const std::string csv = slurp(fs::path(g.out) / (std::string(name) + ".csv"));
      if (run == 0) {
        first = csv;
        bytes += csv.size();
      } else {
        o.require(!csv.empty() && csv == first, std::string(name) + ": CSV differs between runs");
      }
    }
    const auto spec = app::load_sweep(kConfigs + name + ".sweep");
    const auto cfg = app::load_config(kConfigs + name + ".cfg");
    o.require(app::sweep_csv(app::run_sweep(cfg, spec, 1)) == app::sweep_csv(app::run_sweep(cfg, spec, 7)),
              std::string(name) + ": CSV depends on the worker count");
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  o.summary = "3 sweeps run twice through the CLI and with 1 vs 7 workers, " + std::to_string(bytes) +
              " CSV bytes compared";
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
  const SweepRun a = run_study("distance"), b = run_study("budget"), c = run_study("covertness");

  criteria.emplace_back("threshold closed form vs grid", threshold_oracle);
  criteria.emplace_back("Monte-Carlo vs closed-form error rates", monte_carlo);
  criteria.emplace_back("total error continuity and monotone ramps", continuity);
  criteria.emplace_back("AO vs 500x500 grid", ao_vs_grid);
  criteria.emplace_back("position-bound offset adjudication", offset_adjudication);
  criteria.emplace_back("study trends", [&] { return trends(a, b, c); });
  criteria.emplace_back("AO >= every baseline", [&] { return restriction({&a, &b, &c}); });
  criteria.emplace_back("byte-identical sweep CSVs", determinism);

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << " -- "
              << o.summary << '\n';
    for (std::size_t k = 0; k < o.notes.size() && k < 8; ++k) std::cout << "    " << o.notes[k] << '\n';
    if (o.notes.size() > 8) std::cout << "    ... " << o.notes.size() - 8 << " more\n";
    std::cout.flush();
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << '\n';
  return failed == 0 ? 0 : 1;
}
