#include "pacb/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pacb {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

}  // namespace

double norm(const Vec3& v) { return std::hypot(v.x, v.y, v.z); }

double distance(const Vec3& p, const Vec3& q) { return norm(p - q); }

void Room::validate() const {
  require(length > 0.0, "room length must be positive");
  require(width > 0.0, "room width must be positive");
  require(height > 0.0, "room height must be positive");
}

void Scenario::validate() const {
  room.validate();
  const double half = room.width / 2.0;
  require(within(waveguides.y_tx, -half, half), "transmit waveguide offset outside [-D/2, D/2]");
  require(within(waveguides.y_rx, -half, half), "receive waveguide offset outside [-D/2, D/2]");
  const auto on_floor = [&](const Vec3& p, const char* name) {
    require(within(p.x, 0.0, room.length), std::string(name) + " x outside [0, L]");
    require(within(p.y, -half, half), std::string(name) + " y outside [-D/2, D/2]");
    require(p.z == 0.0, std::string(name) + " must lie on the floor (z = 0)");
  };
  on_floor(layout.bd, "backscatter device");
  on_floor(layout.eve_estimate, "eavesdropper estimate");
  require(within(layout.tpa_x, 0.0, room.length), "TPA position outside [0, L]");
  require(within(layout.rpa_x, 0.0, room.length), "RPA position outside [0, L]");
}

Scenario Scenario::with_tpa_x(double x) const {
  Scenario s = *this;
  s.layout.tpa_x = x;
  return s;
}

LinkDistances link_distances(const Scenario& scenario) {
  const Vec3 tpa = scenario.tpa();
  const Vec3 rpa = scenario.rpa();
  const NodeLayout& n = scenario.layout;
  return {
      .feed_to_tpa = distance(scenario.feed_tx(), tpa),
      .tpa_to_bd = distance(tpa, n.bd),
      .bd_to_rpa = distance(n.bd, rpa),
      .rpa_to_feed = distance(rpa, scenario.feed_rx()),
      .bd_to_eve_estimate = distance(n.bd, n.eve_estimate),
      .tpa_to_eve_estimate = distance(tpa, n.eve_estimate),
  };
}

}  // namespace pacb
