#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pacb/app/config.hpp"
#include "pacb/optimizer.hpp"

// Parameter sweeps: for every (curve, sweep value) the AO solution and the
// three fixed-position baselines x in {0, L/4, L/2}.
//
// Sweep files use the same `key = value` syntax as configs:
//
//   name     = distance
//   title    = Rate versus eavesdropper distance
//   variable = d_b_e
//   values   = 1:0.5:10          # start:step:stop, or a comma list
//   curve    = chi=0, delta=0.1  # one line per curve; config overrides
//
// Power variables are swept in dBm; everything else in its config unit.

namespace pacb::app {

enum class SweepVariable { d_b_e, chi, delta, p_max, sigma_e_nominal, epsilon, sigma_p };

std::string_view to_string(SweepVariable v);
std::optional<SweepVariable> parse_sweep_variable(std::string_view name);
bool is_power_variable(SweepVariable v);

struct CurveSpec {
  std::string label;
  std::vector<std::pair<std::string, std::string>> overrides;
};

struct SweepSpec {
  std::string name = "sweep";
  std::string title;
  SweepVariable variable = SweepVariable::d_b_e;
  std::vector<double> values;
  std::vector<CurveSpec> curves;  // empty means a single curve with no overrides

  /// Throws ConfigError: empty or non-increasing values, unknown override keys.
  void validate() const;
  std::size_t curve_count() const { return curves.empty() ? 1 : curves.size(); }
};

SweepSpec parse_sweep(std::string_view text, std::string_view source = "sweep");
SweepSpec load_sweep(const std::string& path);

/// Writes `value` (dBm for power variables) into the config.
void apply_sweep_value(Config& config, SweepVariable variable, double value);

enum class Algorithm { ao, baseline_x0, baseline_xL4, baseline_xL2 };
inline constexpr Algorithm kAlgorithms[] = {Algorithm::ao, Algorithm::baseline_x0,
                                            Algorithm::baseline_xL4, Algorithm::baseline_xL2};
std::string_view to_string(Algorithm a);

struct SweepRow {
  double sweep_value = 0.0;
  std::size_t curve_id = 0;
  Algorithm algo = Algorithm::ao;
  SolveResult result;
};

/// Evaluates all points (concurrently when workers != 1). Rows come back
/// ordered by (curve_id, algo, sweep_value) whatever the completion order.
/// Throws ConfigError if any point yields an invalid scenario.
std::vector<SweepRow> run_sweep(const Config& base, const SweepSpec& spec, unsigned workers = 0);

inline constexpr std::string_view kSweepCsvHeader =
    "sweep_value,curve_id,algo,p0_opt_dbm,tpa_x_m,rate_bps,feasible";

std::string sweep_csv(const std::vector<SweepRow>& rows);

std::string axis_label(SweepVariable v);

}  // namespace pacb::app
