#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "pacb/optimizer.hpp"

namespace pacb::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitInfeasible = 1,
  kExitConfigError = 2,
  kExitOracleFailure = 3,
  kExitIoError = 4,
};

struct GlobalOptions {
  std::string config_path;  // empty: built-in defaults
  std::string out;          // output directory; empty: standard output only
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

struct VerifyOptions {
  Delta3Form delta3 = Delta3Form::derived;
  std::optional<std::uint64_t> mc_samples;  // overrides the config key
};

struct DetectOptions {
  std::optional<double> p0_dbm;  // default: AO optimum, else P_max
  std::optional<double> tpa_x;   // default: AO optimum, else L/4
  std::size_t points = 201;
};

// Each command returns an ExitCode. Results go to `out`, diagnostics to `err`.
int cmd_solve(const GlobalOptions& g, std::ostream& out, std::ostream& err);
int cmd_sweep(const GlobalOptions& g, const std::string& sweep_path, std::ostream& out, std::ostream& err);
int cmd_verify(const GlobalOptions& g, const VerifyOptions& v, std::ostream& out, std::ostream& err);
int cmd_detect(const GlobalOptions& g, const DetectOptions& d, std::ostream& out, std::ostream& err);

}  // namespace pacb::app
