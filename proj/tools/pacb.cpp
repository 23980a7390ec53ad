#include <CLI11.hpp>

#include <iostream>

#include "pacb/app/commands.hpp"

int main(int argc, char** argv) {
  using namespace pacb::app;

  CLI::App app{"Covert backscatter rate optimisation with a pinching-antenna transmitter"};
  app.require_subcommand(1);

  GlobalOptions g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "scenario file (key = value)");
  app.add_option("--out", g.out, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Monte-Carlo seed (overrides the config)");
  app.add_flag("--quiet", g.quiet, "print nothing but errors");

  auto* solve = app.add_subcommand("solve", "optimise power and antenna position for one scenario");

  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep, write CSV and SVG");
  sweep->add_option("spec", sweep_path, "sweep file")->required();

  VerifyOptions verify_opts;
  std::string delta3 = "derived";
  std::uint64_t mc_samples = 0;
  auto* verify = app.add_subcommand("verify", "check the closed forms against brute-force oracles");
  verify->add_option("--delta3", delta3, "position-bound offset form")
      ->check(CLI::IsMember({"derived", "printed"}));
  auto* mc_opt = verify->add_option("--mc-samples", mc_samples, "Monte-Carlo sample count");

  DetectOptions detect_opts;
  double p0_dbm = 0.0, tpa_x = 0.0;
  auto* detect = app.add_subcommand("detect", "tabulate the eavesdropper's error rates versus threshold");
  auto* p0_opt = detect->add_option("--p0", p0_dbm, "transmit power in dBm");
  auto* x_opt = detect->add_option("--x", tpa_x, "transmit antenna position in m");
  detect->add_option("--points", detect_opts.points, "number of thresholds")->check(CLI::Range(2, 10'000'000));

  for (auto* sub : {solve, sweep, verify, detect}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }
  if (*seed_opt) g.seed = seed;

  if (*solve) return cmd_solve(g, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(g, sweep_path, std::cout, std::cerr);
  if (*verify) {
    verify_opts.delta3 = delta3 == "printed" ? pacb::Delta3Form::printed : pacb::Delta3Form::derived;
    if (*mc_opt) verify_opts.mc_samples = mc_samples;
    return cmd_verify(g, verify_opts, std::cout, std::cerr);
  }
  if (*p0_opt) detect_opts.p0_dbm = p0_dbm;
  if (*x_opt) detect_opts.tpa_x = tpa_x;
  return cmd_detect(g, detect_opts, std::cout, std::cerr);
}
