#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "pacb/channel.hpp"
#include "pacb/detection.hpp"
#include "pacb/geometry.hpp"

// Covert uplink rate maximisation over the transmit power P0 and the TPA
// position x:
//
//   max  rate(P0, x)
//   s.t. SNR(P0, x) >= gamma_th                       (reliability)
//        worst-case minimum DEP(P0, x) >= 1 - epsilon (covertness)
//        0 <= P0 <= P_max,  0 <= x <= L
//
// solved by alternating two closed-form subproblems: the best power for a
// fixed position, and the position nearest the device for a fixed power.

namespace pacb {

struct CovertnessSpec {
  double epsilon = 0.05;

  /// Largest backscatter excess power at Eve that keeps the worst-case DEP
  /// at 1 - epsilon: x_hi rho^(-2(1-eps)) - x_lo.
  double xi(const NoiseUncertainty& noise) const;
  friend bool operator==(const CovertnessSpec&, const CovertnessSpec&) = default;
};

struct ReliabilitySpec {
  double gamma_th = 1.0;  // linear SNR threshold
  friend bool operator==(const ReliabilitySpec&, const ReliabilitySpec&) = default;
};

/// Everything a solve needs. Immutable once built; copy to vary a parameter.
struct Problem {
  Scenario scenario;
  RfConstants rf{28e9, 1.4, 2.0};
  PowerConfig power;
  NoiseUncertainty noise{1e-12, 1.9952623149688795};
  EveUncertainty eve;
  CovertnessSpec covertness;
  ReliabilitySpec reliability;

  void validate() const;
  double x_b() const { return scenario.layout.bd.x; }
  friend bool operator==(const Problem&, const Problem&) = default;
};

/// How the constant offset of the squared TPA-to-device distance is formed
/// in the position bounds. `derived` is (y_tx - y_b)^2 + H^2, which is what
/// d_tb^2 = (x - x_b)^2 + (y_tx - y_b)^2 + H^2 requires. `printed` is the
/// variant (y_tx + y_b)^2 - H^2, kept only so the oracle can show it is wrong.
enum class Delta3Form { derived, printed };

std::string_view to_string(Delta3Form form);
double delta3(double y_tx, double y_b, double height, Delta3Form form);

enum class BindingConstraint { covertness, power_budget, reliability, position_box, infeasible };

std::string_view to_string(BindingConstraint b);

struct PowerBounds {
  double snr_floor = 0.0;   // smallest power meeting the SNR threshold
  double covert_cap = 0.0;  // largest power meeting covertness; 0 when xi <= 0
};

PowerBounds power_bounds(const Problem& problem, double tpa_x);

struct PowerSolution {
  double p0 = 0.0;
  BindingConstraint binding = BindingConstraint::power_budget;
};

/// min(P_max, covert_cap) when the SNR floor does not exceed it; nullopt otherwise.
std::optional<PowerSolution> solve_power(const Problem& problem, double tpa_x);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct PositionBounds {
  // Positions meeting the SNR threshold: [lo, hi]. Unbounded when gamma_th == 0,
  // nullopt when the radicand is negative.
  std::optional<Interval> snr;
  bool snr_unbounded = false;
  // Positions violating covertness: the open interval (lo, hi); nullopt when
  // the radicand is negative (no exclusion zone).
  std::optional<Interval> covert_exclusion;
  bool covert_impossible = false;  // xi <= 0
  double snr_radicand = 0.0;
  double covert_radicand = 0.0;
};

PositionBounds position_bounds(const Problem& problem, double p0,
                               Delta3Form form = Delta3Form::derived);

enum class PositionCase {
  lower_exclusion_edge,  // x = lower edge of the exclusion zone
  upper_exclusion_edge,  // x = upper edge
  unconstrained,         // no exclusion zone: x = x_b clamped into the SNR interval
  fallback,              // nearest admissible endpoint outside the two listed cases
};

struct PositionSolution {
  double x = 0.0;
  PositionCase which = PositionCase::unconstrained;
  bool box_clamped = false;
};

std::optional<PositionSolution> solve_position(const Problem& problem, double p0,
                                               Delta3Form form = Delta3Form::derived);

struct ConstraintCheck {
  double snr = 0.0;
  double dep_worst_raw = 0.0;  // unclamped worst-case minimum DEP
  bool reliability = false;
  bool covertness = false;
  bool power_box = false;
  bool position_box = false;

  bool all() const { return reliability && covertness && power_box && position_box; }
};

/// Evaluates every constraint at (p0, x). `rel_tol` = 0 gives exact checks.
ConstraintCheck check_constraints(const Problem& problem, double p0, double x, double rel_tol = 0.0);

/// Rate of the backscatter link at (p0, x).
double rate_at(const Problem& problem, double p0, double x);

struct SolverOptions {
  double init_p0 = -1.0;  // negative: P_max / 4
  double init_x = -1.0;   // negative: L / 4
  double tol = 1e-3;      // bit/s
  int max_iter = 50;
  Delta3Form delta3 = Delta3Form::derived;
};

struct TraceEntry {
  double p0 = 0.0;
  double tpa_x = 0.0;
  double rate = 0.0;
};

struct SolveResult {
  double p0_opt = 0.0;
  double tpa_x_opt = 0.0;
  double rate = 0.0;
  bool feasible = false;
  int iterations = 0;
  std::vector<TraceEntry> trace;
  BindingConstraint binding_constraint = BindingConstraint::infeasible;
  // Diagnostics.
  bool recovered_position = false;  // first power step was retried from x = x_b
  bool converged = false;
  PositionCase last_position_case = PositionCase::unconstrained;
};

SolveResult solve_ao(const Problem& problem, const SolverOptions& options = {});

/// Power-only optimisation with the TPA pinned at `fixed_x`.
SolveResult solve_baseline(const Problem& problem, double fixed_x);

/// Worst-case |h_b^e|^2 or nullopt when the uncertainty ball reaches the device.
std::optional<double> worst_gain(const Problem& problem);

}  // namespace pacb
