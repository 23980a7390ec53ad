#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "pacb/detection.hpp"
#include "pacb/optimizer.hpp"

// Brute-force checks of the closed forms. Everything here evaluates the
// exact constraint and objective expressions on grids; nothing reuses the
// closed-form solutions it is checking.

namespace pacb::oracle {

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 2;

  /// Throws std::invalid_argument unless lo < hi and points >= 2.
  void validate() const;
  double step() const { return (hi - lo) / static_cast<double>(points - 1); }
  double at(std::size_t i) const;
};

struct OracleVerdict {
  double closed_form_value = 0.0;
  double grid_value = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  double grid_resolution = 0.0;
  bool pass = false;
  std::string detail;
};

struct ThresholdVerdict {
  OracleVerdict dep;        // closed-form minimum vs grid minimum
  OracleVerdict threshold;  // closed-form threshold vs nearest grid minimiser
  bool pass = false;
};

inline constexpr double kThresholdDepTolerance = 1e-6;
inline constexpr std::size_t kThresholdPoints = 1'000'000;

/// Default grid for verify_threshold: [x_lo + delta1, x_hi + delta2].
GridSpec threshold_grid(double delta1, double delta2, const NoiseUncertainty& model,
                     std::size_t points = kThresholdPoints);

ThresholdVerdict verify_threshold(double delta1, double delta2, const NoiseUncertainty& model,
                            const GridSpec& grid);

struct JointVerdict {
  OracleVerdict verdict;  // closed_form_value = AO rate, grid_value = best grid rate
  SolveResult ao;
  bool grid_found_feasible = false;
  double grid_p0 = 0.0;
  double grid_x = 0.0;
  bool ao_point_feasible = false;
  std::size_t feasible_nodes = 0;
};

inline constexpr double kFeasibilityRelTol = 1e-9;
inline constexpr std::size_t kJointPoints = 500;

/// Grids covering [0, P_max] x [0, L] with `kJointPoints` nodes each.
GridSpec default_power_grid(const Problem& problem, std::size_t points = kJointPoints);
GridSpec default_position_grid(const Problem& problem, std::size_t points = kJointPoints);

JointVerdict verify_joint(const Problem& problem, const SolverOptions& options,
                    const GridSpec& power_grid, const GridSpec& position_grid);
JointVerdict verify_joint(const Problem& problem, const SolverOptions& options = {});

struct EdgeComparison {
  std::optional<Interval> closed;
  std::optional<Interval> grid;
  double max_gap = 0.0;
  bool match = false;
};

struct Delta3Variant {
  Delta3Form form = Delta3Form::derived;
  EdgeComparison snr;
  EdgeComparison covert;
  bool reproduces_boundary = false;
  JointVerdict p1;
};

struct Delta3Record {
  double p0 = 0.0;
  double grid_step = 0.0;
  double radicand_shift = 0.0;  // printed minus derived covert radicand
  Delta3Form active = Delta3Form::derived;
  Delta3Variant derived;
  Delta3Variant printed;
  bool discriminates = false;  // derived reproduces the boundary, printed does not
  bool pass = false;           // the active form reproduces the boundary

  const Delta3Variant& variant(Delta3Form f) const { return f == Delta3Form::derived ? derived : printed; }
};

inline constexpr std::size_t kBoundaryPoints = 1'000'000;

/// Compares the closed-form position bounds of both offset forms against the
/// feasibility boundary found by gridding x at power `p0` (P_max if negative),
/// and runs verify_joint with each form driving the AO position step.
Delta3Record verify_delta3_variants(const Problem& problem, const SolverOptions& options = {},
                                    double p0 = -1.0, std::size_t points = kBoundaryPoints);

struct MonteCarloVerdict {
  OracleVerdict false_alarm;
  OracleVerdict miss;
  MonteCarloDep empirical;
  double tolerance = 0.0;
  bool pass = false;
};

/// Tolerance used by compare_monte_carlo: max(0.005, 1.5 / sqrt(n)), the
/// larger of the fixed acceptance bound and a 3-sigma binomial bound.
double monte_carlo_tolerance(std::uint64_t n);

MonteCarloVerdict compare_monte_carlo(double threshold, double delta1, double delta2,
                                      const NoiseUncertainty& model, std::uint64_t n,
                                      std::uint64_t seed);

}  // namespace pacb::oracle
