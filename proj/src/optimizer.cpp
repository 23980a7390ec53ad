#include "pacb/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pacb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Geometry {
  double tpa_to_bd;
  double bd_to_rpa;
};

Geometry geometry_at(const Problem& p, double x) {
  const LinkDistances d = link_distances(p.scenario.with_tpa_x(x));
  return {d.tpa_to_bd, d.bd_to_rpa};
}

bool at_least(double value, double bound, double rel_tol) {
  return value >= bound - rel_tol * std::max(std::abs(bound), std::abs(value));
}

bool at_most(double value, double bound, double rel_tol) {
  return value <= bound + rel_tol * std::max(std::abs(bound), std::abs(value));
}

}  // namespace

double CovertnessSpec::xi(const NoiseUncertainty& noise) const {
  return noise.x_hi() * std::pow(noise.rho(), -2.0 * (1.0 - epsilon)) - noise.x_lo();
}

void Problem::validate() const {
  scenario.validate();
  power.validate();
  eve.validate();
  if (!(covertness.epsilon >= 0.0 && covertness.epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon outside [0, 1]");
  }
  if (!(reliability.gamma_th >= 0.0)) throw std::invalid_argument("SNR threshold must be non-negative");
}

std::string_view to_string(Delta3Form form) {
  return form == Delta3Form::derived ? "derived" : "printed";
}

double delta3(double y_tx, double y_b, double height, Delta3Form form) {
  if (form == Delta3Form::derived) return (y_tx - y_b) * (y_tx - y_b) + height * height;
  return (y_tx + y_b) * (y_tx + y_b) - height * height;
}

std::string_view to_string(BindingConstraint b) {
  switch (b) {
    case BindingConstraint::covertness: return "covertness";
    case BindingConstraint::power_budget: return "power_budget";
    case BindingConstraint::reliability: return "reliability";
    case BindingConstraint::position_box: return "position_box";
    case BindingConstraint::infeasible: return "infeasible";
  }
  return "unknown";
}

std::optional<double> worst_gain(const Problem& problem) {
  const NodeLayout& n = problem.scenario.layout;
  if (!(distance(n.bd, n.eve_estimate) > problem.eve.chi)) return std::nullopt;
  return worst_case_eve_gain(n.bd, n.eve_estimate, problem.eve, problem.rf);
}

PowerBounds power_bounds(const Problem& problem, double tpa_x) {
  const Geometry g = geometry_at(problem, tpa_x);
  const PowerConfig& cfg = problem.power;
  const double eta = problem.rf.eta();
  const double reflect = cfg.zeta * cfg.kappa;
  const double xi = problem.covertness.xi(problem.noise);
  const double gamma_th = problem.reliability.gamma_th;

  PowerBounds b;
  if (gamma_th == 0.0) {
    b.snr_floor = 0.0;
  } else if (reflect == 0.0) {
    b.snr_floor = kInf;
  } else {
    const double path = g.tpa_to_bd * g.bd_to_rpa / eta;
    b.snr_floor = gamma_th * cfg.noise_rpa * path * path / reflect;
  }

  const std::optional<double> h = worst_gain(problem);
  if (!h || xi <= 0.0) {
    b.covert_cap = 0.0;
  } else if (reflect == 0.0 || *h == 0.0) {
    b.covert_cap = kInf;
  } else {
    b.covert_cap = xi * g.tpa_to_bd * g.tpa_to_bd / (reflect * eta * *h);
  }
  return b;
}

std::optional<PowerSolution> solve_power(const Problem& problem, double tpa_x) {
  const PowerBounds b = power_bounds(problem, tpa_x);
  if (b.covert_cap <= 0.0) return std::nullopt;
  const double cap = std::min(problem.power.p_max, b.covert_cap);
  if (!(cap > 0.0) || b.snr_floor > cap) return std::nullopt;
  PowerSolution s;
  s.p0 = cap;
  s.binding = b.covert_cap < problem.power.p_max ? BindingConstraint::covertness
                                                 : BindingConstraint::power_budget;
  return s;
}

PositionBounds position_bounds(const Problem& problem, double p0, Delta3Form form) {
  if (!(p0 > 0.0)) throw std::invalid_argument("position bounds need a positive transmit power");
  const PowerConfig& cfg = problem.power;
  const Scenario& s = problem.scenario;
  const double eta = problem.rf.eta();
  const double x_b = problem.x_b();
  const double reflect = cfg.zeta * cfg.kappa;
  const double offset = delta3(s.waveguides.y_tx, s.layout.bd.y, s.room.height, form);
  const double d_br = link_distances(s).bd_to_rpa;

  PositionBounds out;
  const double gamma_th = problem.reliability.gamma_th;
  if (gamma_th == 0.0) {
    out.snr_unbounded = true;
    out.snr_radicand = kInf;
    out.snr = Interval{-kInf, kInf};
  } else {
    out.snr_radicand = reflect * p0 * eta * eta / (gamma_th * cfg.noise_rpa * d_br * d_br) - offset;
    if (out.snr_radicand >= 0.0) {
      const double w = std::sqrt(out.snr_radicand);
      out.snr = Interval{x_b - w, x_b + w};
    }
  }

  const double xi = problem.covertness.xi(problem.noise);
  const std::optional<double> h = worst_gain(problem);
  if (!h || xi <= 0.0) {
    out.covert_impossible = true;
    out.covert_radicand = kInf;
    out.covert_exclusion = Interval{-kInf, kInf};
  } else {
    out.covert_radicand = reflect * eta * p0 * *h / xi - offset;
    if (out.covert_radicand >= 0.0) {
      const double w = std::sqrt(out.covert_radicand);
      out.covert_exclusion = Interval{x_b - w, x_b + w};
    }
  }
  return out;
}

std::optional<PositionSolution> solve_position(const Problem& problem, double p0, Delta3Form form) {
  const PositionBounds b = position_bounds(problem, p0, form);
  if (!b.snr || b.covert_impossible) return std::nullopt;

  const double L = problem.scenario.room.length;
  const double x_b = problem.x_b();
  const double lo = std::max(0.0, b.snr->lo);
  const double hi = std::min(L, b.snr->hi);
  if (lo > hi) return std::nullopt;

  PositionSolution sol;
  if (!b.covert_exclusion) {
    sol.x = std::clamp(x_b, lo, hi);
    sol.which = PositionCase::unconstrained;
    sol.box_clamped = sol.x != x_b;
    return sol;
  }

  const Interval& ex = *b.covert_exclusion;
  // Edge cases: equidistant from x_b, the lower edge wins ties.
  if (ex.lo >= lo && ex.lo <= hi) {
    sol.x = ex.lo;
    sol.which = PositionCase::lower_exclusion_edge;
    return sol;
  }
  if (ex.hi <= hi && ex.hi >= lo) {
    sol.x = ex.hi;
    sol.which = PositionCase::upper_exclusion_edge;
    return sol;
  }

  // Neither edge is admissible: only the interval ends can remain feasible.
  std::optional<double> best;
  for (double c : {lo, hi}) {
    if (c > ex.lo && c < ex.hi) continue;
    if (!best || std::abs(c - x_b) < std::abs(*best - x_b)) best = c;
  }
  if (!best) return std::nullopt;
  sol.x = *best;
  sol.which = PositionCase::fallback;
  sol.box_clamped = true;
  return sol;
}

double rate_at(const Problem& problem, double p0, double x) {
  const Geometry g = geometry_at(problem, x);
  return backscatter_budget(p0, g.tpa_to_bd, g.bd_to_rpa, problem.power, problem.rf).rate;
}

ConstraintCheck check_constraints(const Problem& problem, double p0, double x, double rel_tol) {
  const Geometry g = geometry_at(problem, x);
  ConstraintCheck c;
  c.snr = backscatter_budget(p0, g.tpa_to_bd, g.bd_to_rpa, problem.power, problem.rf).snr;
  c.reliability = at_least(c.snr, problem.reliability.gamma_th, rel_tol);

  const std::optional<double> h = worst_gain(problem);
  if (h) {
    c.dep_worst_raw =
        worst_case_dep_raw(p0, g.tpa_to_bd, *h, problem.power, problem.rf, problem.noise);
    c.covertness = at_least(c.dep_worst_raw, 1.0 - problem.covertness.epsilon, rel_tol);
  } else {
    c.dep_worst_raw = -kInf;
    c.covertness = false;
  }
  c.power_box = p0 >= 0.0 && at_most(p0, problem.power.p_max, rel_tol);
  const double L = problem.scenario.room.length;
  c.position_box = x >= -rel_tol * L && x <= L * (1.0 + rel_tol);
  return c;
}

namespace {

SolveResult infeasible_result(double x, int iterations) {
  SolveResult r;
  r.tpa_x_opt = x;
  r.iterations = iterations;
  r.feasible = false;
  r.binding_constraint = BindingConstraint::infeasible;
  return r;
}

BindingConstraint classify(const Problem& problem, const PowerSolution& power, double x,
                           bool box_clamped) {
  const ConstraintCheck c = check_constraints(problem, power.p0, x);
  if (c.snr <= problem.reliability.gamma_th * (1.0 + 1e-9)) return BindingConstraint::reliability;
  if (box_clamped) return BindingConstraint::position_box;
  return power.binding;
}

}  // namespace

SolveResult solve_ao(const Problem& problem, const SolverOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("AO tolerance must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("AO needs at least one iteration");

  const double L = problem.scenario.room.length;
  double x = options.init_x >= 0.0 ? options.init_x : L / 4.0;
  const double init_p0 = options.init_p0 >= 0.0 ? options.init_p0 : problem.power.p_max / 4.0;
  double prev_rate = rate_at(problem, init_p0, x);

  SolveResult result;
  PowerSolution power;
  PositionSolution position;
  for (int k = 1; k <= options.max_iter; ++k) {
    std::optional<PowerSolution> ps = solve_power(problem, x);
    if (!ps && k == 1) {
      // The SNR floor grows with distance; retry once from the best-SNR position
      // when covertness alone does not rule the instance out.
      const PowerBounds b = power_bounds(problem, x);
      if (b.covert_cap > 0.0 && b.snr_floor <= b.covert_cap) {
        x = std::clamp(problem.x_b(), 0.0, L);
        ps = solve_power(problem, x);
        result.recovered_position = true;
      }
    }
    if (!ps) {
      SolveResult r = infeasible_result(x, k);
      r.trace = std::move(result.trace);
      r.recovered_position = result.recovered_position;
      return r;
    }
    power = *ps;

    std::optional<PositionSolution> pos = solve_position(problem, power.p0, options.delta3);
    if (!pos) {
      SolveResult r = infeasible_result(x, k);
      r.trace = std::move(result.trace);
      r.recovered_position = result.recovered_position;
      return r;
    }
    position = *pos;
    x = position.x;

    const double rate = rate_at(problem, power.p0, x);
    result.trace.push_back({power.p0, x, rate});
    result.iterations = k;
    if (std::abs(rate - prev_rate) < options.tol) {
      result.converged = true;
      break;
    }
    prev_rate = rate;
  }

  const TraceEntry& last = result.trace.back();
  result.p0_opt = last.p0;
  result.tpa_x_opt = last.tpa_x;
  result.rate = last.rate;
  result.last_position_case = position.which;
  // The last position step can only move x away from where `power` was
  // computed, so re-validate the returned pair exactly as a caller would.
  result.feasible = check_constraints(problem, result.p0_opt, result.tpa_x_opt, 1e-9).all();
  result.binding_constraint = result.feasible
                                  ? classify(problem, power, result.tpa_x_opt, position.box_clamped)
                                  : BindingConstraint::infeasible;
  if (!result.feasible) result.rate = 0.0;
  return result;
}

SolveResult solve_baseline(const Problem& problem, double fixed_x) {
  const double L = problem.scenario.room.length;
  if (!(fixed_x >= 0.0 && fixed_x <= L)) throw std::invalid_argument("baseline position outside [0, L]");
  const std::optional<PowerSolution> ps = solve_power(problem, fixed_x);
  if (!ps) return infeasible_result(fixed_x, 1);

  SolveResult r;
  r.p0_opt = ps->p0;
  r.tpa_x_opt = fixed_x;
  r.rate = rate_at(problem, ps->p0, fixed_x);
  r.feasible = true;
  r.iterations = 1;
  r.converged = true;
  r.trace.push_back({r.p0_opt, fixed_x, r.rate});
  r.binding_constraint = classify(problem, *ps, fixed_x, false);
  return r;
}

}  // namespace pacb
