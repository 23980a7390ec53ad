#include <catch_amalgamated.hpp>

#include <random>

#include "pacb/app/config.hpp"
#include "pacb/units.hpp"

using namespace pacb;
using namespace pacb::app;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

TEST_CASE("parse values with units") {
  const auto c = parse_config(
      "# comment\n"
      "p_max = 40 dBm\n"
      "sigma_p = -110dBm   # trailing comment\n"
      "sigma_e_nominal = 1e-12 W\n"
      "carrier_frequency = 28 GHz\n"
      "bandwidth = 10 kHz\n"
      "noise_uncertainty = 3 dB\n"
      "room_height = 300 cm\n"
      "\n"
      "seed = 7\n");
  CHECK_THAT(c.p_max, WithinRel(10.0, 1e-15));
  CHECK_THAT(c.sigma_p, WithinRel(1e-14, 1e-14));
  CHECK(c.sigma_e_nominal == 1e-12);
  CHECK(c.carrier_frequency == 28e9);
  CHECK(c.bandwidth == 1e4);
  CHECK_THAT(c.noise_uncertainty, WithinRel(1.9952623149688795, 1e-15));
  CHECK(c.room_height == 3.0);
  CHECK(c.seed == 7);
}

TEST_CASE("config errors name the key and line") {
  try {
    parse_config("room_length = 20\nhieght = 3\n");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "hieght");
    CHECK(e.line() == 2);
    CHECK_THAT(std::string(e.what()), ContainsSubstring("unknown key 'hieght'"));
  }
  CHECK_THROWS_AS(parse_config("p_max = 50\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("p_max = 50 furlongs\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("chi = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("seed = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just words\n"), ConfigError);
}

TEST_CASE("invalid scenarios are config errors") {
  Config c;
  c.room_height = -1.0;
  CHECK_THROWS_AS(to_problem(c), ConfigError);
  c = Config{};
  c.d_b_e = 50.0;  // estimate outside the room
  CHECK_THROWS_AS(to_problem(c), ConfigError);
  c = Config{};
  c.kappa = 2.0;
  CHECK_THROWS_AS(to_problem(c), ConfigError);
}

TEST_CASE("defaults build the default scenario") {
  const Problem p = to_problem(Config{});
  CHECK(p.scenario.layout.bd == Vec3{10, 0, 0});
  CHECK(p.scenario.layout.eve_estimate == Vec3{15, 0, 0});
  CHECK(p.scenario.layout.rpa_x == 10.0);
  CHECK(p.scenario.room.height == 3.0);
  CHECK_THAT(units::watts_to_dbm(p.power.p_max), WithinRel(50.0, 1e-14));
  CHECK(p.power.kappa == 0.375);
  CHECK(p.eve.g_est == 1.278);
}

TEST_CASE("rendered configs parse back field for field") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Config c;
    c.room_length = 5.0 + 30.0 * u(rng);
    c.d_b_e = 10.0 * u(rng);
    c.eve_bearing_deg = 360.0 * u(rng);
    c.p_max = units::dbm_to_watts(20.0 + 30.0 * u(rng));
    c.sigma_p = units::dbm_to_watts(-120.0 + 10.0 * u(rng));
    c.noise_uncertainty = 1.0 + 3.0 * u(rng);
    c.chi = u(rng);
    c.epsilon = u(rng);
    c.seed = rng();
    if (i % 2) c.bd_x = 3.0 * u(rng);
    const Config back = parse_config(render_config(c));
    CHECK(back == c);
    CHECK(render_config(back) == render_config(c));
  }
}
