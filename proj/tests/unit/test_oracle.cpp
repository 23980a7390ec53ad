#include <catch_amalgamated.hpp>

#include <cmath>

#include "pacb/app/config.hpp"
#include "pacb/oracle.hpp"
#include "pacb/units.hpp"

using namespace pacb;
using namespace pacb::oracle;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Problem with(std::initializer_list<std::pair<const char*, const char*>> kv) {
  app::Config c;
  for (const auto& [k, v] : kv) app::apply_assignment(c, k, v);
  return app::to_problem(c);
}

}  // namespace

TEST_CASE("grid spec") {
  const GridSpec g{0.0, 1.0, 11};
  CHECK(g.step() == 0.1);
  CHECK(g.at(10) == 1.0);
  CHECK_THROWS(GridSpec{1.0, 1.0, 5}.validate());
  CHECK_THROWS(GridSpec{0.0, 1.0, 1}.validate());
}

TEST_CASE("threshold oracle on the default operating point") {
  const auto p = with({});
  const auto r = solve_ao(p);
  const auto det = analyze_detection(r.p0_opt, p.scenario.with_tpa_x(r.tpa_x_opt), p.power, p.rf, p.noise, p.eve);
  const auto v = verify_threshold(det.delta1, det.delta2, p.noise, threshold_grid(det.delta1, det.delta2, p.noise));
  CHECK(v.pass);
  CHECK(v.dep.abs_gap <= kThresholdDepTolerance);
  CHECK(v.threshold.abs_gap <= v.threshold.grid_resolution);
}

TEST_CASE("threshold oracle edge cases") {
  const auto m = NoiseUncertainty::from_db(1e-12, 3.0);
  auto v = verify_threshold(4e-13, 4e-13, m, threshold_grid(4e-13, 4e-13, m, 100'000));
  CHECK(v.pass);
  CHECK_THAT(v.dep.grid_value, WithinAbs(1.0, 1e-12));

  const double gap = m.x_hi() - m.x_lo();
  v = verify_threshold(1e-13, 1e-13 + 2.0 * gap, m, threshold_grid(1e-13, 1e-13 + 2.0 * gap, m, 100'000));
  CHECK(v.pass);
  CHECK(v.dep.grid_value == 0.0);
  CHECK(v.dep.closed_form_value == 0.0);
}

TEST_CASE("joint oracle agrees with AO") {
  SECTION("default scenario") {
    const auto v = verify_joint(with({}));
    CHECK(v.verdict.pass);
    CHECK(v.ao_point_feasible);
    CHECK(v.grid_found_feasible);
    CHECK(v.verdict.grid_value <= v.ao.rate);
    CHECK(v.ao.rate - v.verdict.grid_value <= v.verdict.grid_resolution);
  }
  SECTION("infeasible on both sides") {
    const auto v = verify_joint(with({{"epsilon", "0"}}));
    CHECK(v.verdict.pass);
    CHECK_FALSE(v.ao.feasible);
    CHECK_FALSE(v.grid_found_feasible);
  }
  SECTION("covertness vacuous") {
    const auto p = with({{"epsilon", "1"}, {"gamma_th", "0"}});
    const auto v = verify_joint(p);
    CHECK(v.verdict.pass);
    CHECK(v.grid_p0 == p.power.p_max);
    CHECK_THAT(v.grid_x, WithinAbs(p.x_b(), p.scenario.room.length / 499.0));
  }
}

TEST_CASE("offset adjudication") {
  const auto p = with({});
  const auto rec = verify_delta3_variants(p, {}, -1.0, 200'000);
  CHECK(rec.derived.reproduces_boundary);
  CHECK_FALSE(rec.printed.reproduces_boundary);
  CHECK(rec.discriminates);
  CHECK(rec.pass);
  CHECK_THAT(rec.radicand_shift, WithinRel(2.0 * 9.0, 1e-12));

  SolverOptions forced;
  forced.delta3 = Delta3Form::printed;
  const auto bad = verify_delta3_variants(p, forced, -1.0, 200'000);
  CHECK_FALSE(bad.pass);
  CHECK(bad.active == Delta3Form::printed);
}

TEST_CASE("offset shift with the antenna line over the device") {
  const auto p = with({{"waveguide_tx_y", "0"}});
  const auto rec = verify_delta3_variants(p, {}, -1.0, 100'000);
  CHECK_THAT(rec.radicand_shift, WithinRel(18.0, 1e-12));
  CHECK(rec.derived.reproduces_boundary);
}

TEST_CASE("Monte-Carlo comparison") {
  const auto m = NoiseUncertainty::from_db(units::dbm_to_watts(-90.0), 3.0);
  const double d1 = 1e-13, d2 = 5e-13;
  const auto v = compare_monte_carlo(m.nominal() + d1, d1, d2, m, 1'000'000, 42);
  CHECK(v.pass);
  CHECK(v.tolerance == 0.005);
  CHECK(monte_carlo_tolerance(100) == 0.15);
}
