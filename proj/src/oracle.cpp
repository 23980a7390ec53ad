#include "pacb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace pacb::oracle {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs fn(begin, end) over contiguous slices of [0, n). Callers write into
// per-index storage so the outcome does not depend on the slicing.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, std::max<std::size_t>(1, n / 4096));
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

double rel_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

OracleVerdict make_verdict(double closed, double grid, double resolution) {
  OracleVerdict v;
  v.closed_form_value = closed;
  v.grid_value = grid;
  v.abs_gap = std::abs(closed - grid);
  v.rel_gap = rel_gap(closed, grid);
  v.grid_resolution = resolution;
  return v;
}

double edge_gap(double closed, double grid) {
  if (std::isinf(closed) || std::isinf(grid)) {
    return (std::isinf(closed) && std::isinf(grid) && (closed > 0) == (grid > 0)) ? 0.0 : kInf;
  }
  return std::abs(closed - grid);
}

EdgeComparison compare_edges(const std::optional<Interval>& closed,
                             const std::optional<Interval>& grid, double step) {
  EdgeComparison c;
  c.closed = closed;
  c.grid = grid;
  if (!closed && !grid) {
    c.match = true;
  } else if (closed && grid) {
    c.max_gap = std::max(edge_gap(closed->lo, grid->lo), edge_gap(closed->hi, grid->hi));
    c.match = c.max_gap <= step * (1.0 + 1e-9);
  } else {
    c.max_gap = kInf;
    c.match = false;
  }
  return c;
}

// Smallest and largest grid point satisfying `pred`, with the grid ends
// standing in for "continues past the grid".
template <class Pred>
std::optional<Interval> grid_extent(const GridSpec& grid, const std::vector<char>& flags, Pred pred) {
  std::size_t first = grid.points, last = 0;
  for (std::size_t i = 0; i < grid.points; ++i) {
    if (pred(flags[i])) {
      if (first == grid.points) first = i;
      last = i;
    }
  }
  if (first == grid.points) return std::nullopt;
  Interval out{grid.at(first), grid.at(last)};
  if (first == 0) out.lo = -kInf;
  if (last == grid.points - 1) out.hi = kInf;
  return out;
}

}  // namespace

void GridSpec::validate() const {
  if (!(lo < hi)) throw std::invalid_argument("grid requires lo < hi");
  if (points < 2) throw std::invalid_argument("grid requires at least two points");
}

double GridSpec::at(std::size_t i) const {
  if (i + 1 == points) return hi;
  return lo + static_cast<double>(i) * step();
}

// ---------------------------------------------------------------------------
// Threshold oracle

GridSpec threshold_grid(double delta1, double delta2, const NoiseUncertainty& model, std::size_t points) {
  return {model.x_lo() + delta1, model.x_hi() + delta2, points};
}

ThresholdVerdict verify_threshold(double delta1, double delta2, const NoiseUncertainty& model,
                            const GridSpec& grid) {
  grid.validate();
  std::vector<double> values(grid.points);
  parallel_for(grid.points, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) values[i] = dep_total(grid.at(i), delta1, delta2, model);
  });

  const double grid_min = *std::min_element(values.begin(), values.end());
  // The minimiser set can be an interval (flat or separable cases).
  constexpr double kBand = 1e-12;
  std::size_t first = grid.points, last = 0;
  for (std::size_t i = 0; i < grid.points; ++i) {
    if (values[i] <= grid_min + kBand) {
      if (first == grid.points) first = i;
      last = i;
    }
  }

  const OptimalDetection closed = optimal_detection(delta1, delta2, model);
  const double step = grid.step();
  const double nearest = std::clamp(closed.threshold, grid.at(first), grid.at(last));

  ThresholdVerdict out;
  out.dep = make_verdict(closed.dep_min, grid_min, step);
  out.dep.pass = out.dep.abs_gap <= kThresholdDepTolerance;
  out.threshold = make_verdict(closed.threshold, nearest, step);
  out.threshold.pass = out.threshold.abs_gap <= step * (1.0 + 1e-9);
  out.pass = out.dep.pass && out.threshold.pass;
  std::ostringstream os;
  os << "minimiser set [" << grid.at(first) << ", " << grid.at(last) << "]";
  out.threshold.detail = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Joint power/position oracle

GridSpec default_power_grid(const Problem& problem, std::size_t points) {
  return {0.0, problem.power.p_max, points};
}

GridSpec default_position_grid(const Problem& problem, std::size_t points) {
  return {0.0, problem.scenario.room.length, points};
}

JointVerdict verify_joint(const Problem& problem, const SolverOptions& options) {
  return verify_joint(problem, options, default_power_grid(problem), default_position_grid(problem));
}

JointVerdict verify_joint(const Problem& problem, const SolverOptions& options,
                    const GridSpec& power_grid, const GridSpec& position_grid) {
  power_grid.validate();
  position_grid.validate();

  JointVerdict out;
  out.ao = solve_ao(problem, options);

  const std::size_t np = power_grid.points;
  const std::size_t nx = position_grid.points;
  std::vector<double> rates(np * nx, -1.0);
  parallel_for(nx, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const double x = position_grid.at(j);
      for (std::size_t i = 0; i < np; ++i) {
        const double p0 = power_grid.at(i);
        if (check_constraints(problem, p0, x).all()) rates[j * np + i] = rate_at(problem, p0, x);
      }
    }
  });

  double best = -1.0;
  for (std::size_t k = 0; k < rates.size(); ++k) {
    if (rates[k] < 0.0) continue;
    ++out.feasible_nodes;
    if (rates[k] > best) {
      best = rates[k];
      out.grid_p0 = power_grid.at(k % np);
      out.grid_x = position_grid.at(k / np);
    }
  }
  out.grid_found_feasible = best >= 0.0;
  const double grid_best = std::max(best, 0.0);

  double slack = 0.0;
  if (out.ao.feasible) {
    out.ao_point_feasible =
        check_constraints(problem, out.ao.p0_opt, out.ao.tpa_x_opt, kFeasibilityRelTol).all();
    // Rate lost by snapping the AO point one power step down and one position
    // step away from the device.
    const double x_b = problem.x_b();
    const double away = out.ao.tpa_x_opt <= x_b ? out.ao.tpa_x_opt - position_grid.step()
                                                : out.ao.tpa_x_opt + position_grid.step();
    const double p_snap = std::max(0.0, out.ao.p0_opt - power_grid.step());
    slack = out.ao.rate - rate_at(problem, p_snap, away);
  }

  out.verdict = make_verdict(out.ao.rate, grid_best, slack);
  std::ostringstream os;
  if (!out.ao.feasible) {
    out.verdict.pass = !out.grid_found_feasible;
    os << (out.verdict.pass ? "both infeasible" : "AO infeasible but grid found a feasible node");
  } else {
    const bool not_beaten = !out.grid_found_feasible ||
                            grid_best <= out.ao.rate * (1.0 + kFeasibilityRelTol) + 1e-12;
    out.verdict.pass = out.ao_point_feasible && not_beaten;
    if (!out.ao_point_feasible) os << "AO point violates a constraint; ";
    if (!not_beaten) os << "grid beats AO; ";
    if (!out.grid_found_feasible) os << "no feasible grid node (region below grid resolution); ";
    os << "AO-grid gap " << out.ao.rate - grid_best << " bit/s, slack " << slack << " bit/s";
  }
  out.verdict.detail = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Position-bound offset adjudication

Delta3Record verify_delta3_variants(const Problem& problem, const SolverOptions& options,
                                    double p0, std::size_t points) {
  Delta3Record rec;
  rec.p0 = p0 > 0.0 ? p0 : problem.power.p_max;
  rec.active = options.delta3;
  const double x_b = problem.x_b();

  const PositionBounds closed_derived = position_bounds(problem, rec.p0, Delta3Form::derived);
  const PositionBounds closed_printed = position_bounds(problem, rec.p0, Delta3Form::printed);
  rec.radicand_shift = closed_printed.covert_radicand - closed_derived.covert_radicand;

  double span = problem.scenario.room.length / 2.0;
  for (const PositionBounds* b : {&closed_derived, &closed_printed}) {
    for (const auto& iv : {b->snr, b->covert_exclusion}) {
      if (!iv) continue;
      for (double e : {iv->lo, iv->hi}) {
        if (std::isfinite(e)) span = std::max(span, 1.25 * std::abs(e - x_b));
      }
    }
  }
  const GridSpec grid{x_b - span, x_b + span, points};
  rec.grid_step = grid.step();

  std::vector<char> covert_ok(points), snr_ok(points);
  parallel_for(points, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const ConstraintCheck c = check_constraints(problem, rec.p0, grid.at(i));
      covert_ok[i] = c.covertness;
      snr_ok[i] = c.reliability;
    }
  });
  const auto grid_snr = grid_extent(grid, snr_ok, [](char ok) { return ok != 0; });
  const auto grid_exclusion = grid_extent(grid, covert_ok, [](char ok) { return ok == 0; });

  auto fill = [&](Delta3Variant& v, Delta3Form form, const PositionBounds& b) {
    v.form = form;
    v.snr = compare_edges(b.snr, grid_snr, rec.grid_step);
    v.covert = compare_edges(b.covert_exclusion, grid_exclusion, rec.grid_step);
    v.reproduces_boundary = v.snr.match && v.covert.match;
    SolverOptions o = options;
    o.delta3 = form;
    v.p1 = verify_joint(problem, o);
  };
  fill(rec.derived, Delta3Form::derived, closed_derived);
  fill(rec.printed, Delta3Form::printed, closed_printed);

  rec.discriminates = rec.derived.reproduces_boundary && !rec.printed.reproduces_boundary;
  rec.pass = rec.variant(rec.active).reproduces_boundary;
  return rec;
}

// ---------------------------------------------------------------------------
// Monte-Carlo comparison

double monte_carlo_tolerance(std::uint64_t n) {
  return std::max(0.005, 1.5 / std::sqrt(static_cast<double>(n)));
}

MonteCarloVerdict compare_monte_carlo(double threshold, double delta1, double delta2,
                                      const NoiseUncertainty& model, std::uint64_t n,
                                      std::uint64_t seed) {
  MonteCarloVerdict out;
  out.empirical = monte_carlo_dep(threshold, delta1, delta2, model, n, seed);
  out.tolerance = monte_carlo_tolerance(n);
  const double sampling = 1.0 / std::sqrt(static_cast<double>(n));
  out.false_alarm = make_verdict(dep_false_alarm(threshold, delta1, model),
                                 out.empirical.p_false_alarm, sampling);
  out.miss = make_verdict(dep_miss(threshold, delta2, model), out.empirical.p_miss, sampling);
  out.false_alarm.pass = out.false_alarm.abs_gap <= out.tolerance;
  out.miss.pass = out.miss.abs_gap <= out.tolerance;
  out.pass = out.false_alarm.pass && out.miss.pass;
  return out;
}

}  // namespace pacb::oracle
