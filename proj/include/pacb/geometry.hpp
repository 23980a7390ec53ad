#pragma once

// Room coordinates: origin at the centre of the feed-point wall on the floor,
// x along the waveguides, y across the room, z up. Both waveguides hang at
// z = H with their feed points at x = 0.

namespace pacb {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double norm(const Vec3& v);

/// Euclidean distance; symmetric, zero iff p == q.
double distance(const Vec3& p, const Vec3& q);

struct Room {
  double length = 20.0;  // L
  double width = 20.0;   // D
  double height = 3.0;   // H

  void validate() const;
  friend bool operator==(const Room&, const Room&) = default;
};

struct WaveguidePair {
  double y_tx = -0.5;  // lateral offset of the transmit waveguide
  double y_rx = 0.5;   // lateral offset of the receive waveguide

  friend bool operator==(const WaveguidePair&, const WaveguidePair&) = default;
};

struct NodeLayout {
  Vec3 bd{10.0, 0.0, 0.0};            // backscatter device, on the floor
  Vec3 eve_estimate{15.0, 0.0, 0.0};  // estimated eavesdropper location, on the floor
  double tpa_x = 5.0;                 // transmit pinching antenna position along its waveguide
  double rpa_x = 10.0;                // receive pinching antenna position

  friend bool operator==(const NodeLayout&, const NodeLayout&) = default;
};

/// Geometric part of a deployment. Value type; copy it to move an antenna.
struct Scenario {
  Room room;
  WaveguidePair waveguides;
  NodeLayout layout;

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;

  Vec3 feed_tx() const { return {0.0, waveguides.y_tx, room.height}; }
  Vec3 feed_rx() const { return {0.0, waveguides.y_rx, room.height}; }
  Vec3 tpa() const { return {layout.tpa_x, waveguides.y_tx, room.height}; }
  Vec3 rpa() const { return {layout.rpa_x, waveguides.y_rx, room.height}; }

  Scenario with_tpa_x(double x) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct LinkDistances {
  double feed_to_tpa = 0.0;
  double tpa_to_bd = 0.0;
  double bd_to_rpa = 0.0;
  double rpa_to_feed = 0.0;
  double bd_to_eve_estimate = 0.0;
  double tpa_to_eve_estimate = 0.0;
};

LinkDistances link_distances(const Scenario& scenario);

}  // namespace pacb
