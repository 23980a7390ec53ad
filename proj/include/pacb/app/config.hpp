#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pacb/optimizer.hpp"

// Flat `key = value` scenario files.
//
//   # comment
//   p_max          = 50 dBm
//   sigma_p        = -116 dBm
//   carrier_frequency = 28 GHz
//   noise_uncertainty = 3 dB
//
// Unknown keys are rejected; missing keys keep their defaults. Values are
// stored in linear SI units (watts, hertz, meters, plain ratios).

namespace pacb::app {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string message, std::string key = {}, std::size_t line = 0);

  const std::string& key() const { return key_; }
  std::size_t line() const { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

struct Config {
  double room_length = 20.0;
  double room_width = 20.0;
  double room_height = 3.0;
  double waveguide_tx_y = -0.5;
  double waveguide_rx_y = 0.5;
  std::optional<double> bd_x;  // default: room_length / 2
  double bd_y = 0.0;
  double d_b_e = 5.0;            // distance from the device to the eavesdropper estimate
  double eve_bearing_deg = 0.0;  // direction of the estimate from the device, from +x
  std::optional<double> rpa_x;   // default: room_length / 2

  double carrier_frequency = 28e9;
  double effective_index = 1.4;
  double path_loss_exponent = 2.0;

  double p_max = 100.0;  // 50 dBm
  double kappa = 0.375;
  double zeta = 1.0;
  double sigma_p = 2.5118864315095823e-15;  // -116 dBm
  double bandwidth = 1e4;

  double sigma_e_nominal = 1e-12;  // -90 dBm
  double noise_uncertainty = 1.9952623149688795;  // 3 dB
  double chi = 0.0;
  double delta = 0.1;
  double g_est = 1.278;

  double epsilon = 0.05;
  double gamma_th = 1.0;  // 0 dB

  std::uint64_t seed = 42;
  std::uint64_t mc_samples = 1'000'000;
  double ao_tol = 1e-3;
  std::int64_t ao_max_iter = 50;

  friend bool operator==(const Config&, const Config&) = default;
};

/// Parses a whole document. `source` only decorates error messages.
Config parse_config(std::string_view text, std::string_view source = "config");
Config load_config(const std::string& path);

/// Renders every key in a form parse_config reads back to an identical Config.
std::string render_config(const Config& config);

/// Sets one key from its textual value, e.g. ("p_max", "40 dBm").
void apply_assignment(Config& config, std::string_view key, std::string_view value, std::size_t line = 0);

bool is_config_key(std::string_view key);
std::vector<std::string> config_keys();

/// Builds and validates the solver problem. Throws ConfigError on invalid values.
Problem to_problem(const Config& config);
SolverOptions to_solver_options(const Config& config);

}  // namespace pacb::app
