#include "gatesim/mobility.hpp"

#include <algorithm>
#include <cmath>

namespace gatesim {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Max heading deviation from the exit bearing; keeps the axial speed
// component strictly positive so every walk leaves the gate in finite time.
constexpr double kMaxDeviation = kPi / 2.0 - 0.2;
constexpr double kLateralJitterM = 0.5;

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a < -kPi) a += 2.0 * kPi;
  return a;
}

struct Axis {
  Vec2 u;  // unit vector entrance -> exit
};

Axis gate_axis(const GateGeometry& g) {
  double dx = g.exit.x - g.entrance.x;
  double dy = g.exit.y - g.entrance.y;
  double len = std::hypot(dx, dy);
  return Axis{Vec2{dx / len, dy / len}};
}

// Signed progress past the exit plane (negative while inside).
double progress(const Vec2& p, const GateGeometry& g, const Axis& ax) {
  return (p.x - g.exit.x) * ax.u.x + (p.y - g.exit.y) * ax.u.y;
}

double bearing_to_exit(const Vec2& p, const GateGeometry& g) {
  return std::atan2(g.exit.y - p.y, g.exit.x - p.x);
}

}  // namespace

std::vector<UserEquipment> init_users(const ScenarioConfig& cfg, RngStream& rng) {
  const auto& g = cfg.gate;
  const Axis ax = gate_axis(g);
  const Vec2 lateral{-ax.u.y, ax.u.x};

  const int k = cfg.num_ues;
  const double ratio = cfg.mobility.speed_ratio;
  const double s_min = 2.0 * cfg.mobility.mean_speed_mps / (1.0 + ratio);
  const double s_max = ratio * s_min;

  std::vector<UserEquipment> ues(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    auto& ue = ues[static_cast<std::size_t>(i)];
    ue.id = i;
    double jitter = rng.uniform(-kLateralJitterM, kLateralJitterM);
    ue.position = Vec2{g.entrance.x + jitter * lateral.x, g.entrance.y + jitter * lateral.y};
    ue.position.x = std::clamp(ue.position.x, 0.0, g.width_m);
    ue.position.y = std::clamp(ue.position.y, 0.0, g.depth_m);
    ue.heading_rad = bearing_to_exit(ue.position, g);
    ue.speed_mps = (k == 1) ? cfg.mobility.mean_speed_mps
                            : s_min + (s_max - s_min) * static_cast<double>(i) /
                                          static_cast<double>(k - 1);
    ue.avg_rate_bps = cfg.r_init_bps;
    ue.in_gate = true;
  }
  return ues;
}

void step(UserEquipment& ue, double dt_s, double now_s, const GateGeometry& geom,
          const MobilityConfig& cfg, RngStream& rng) {
  if (!ue.in_gate || dt_s <= 0.0) return;

  const Axis ax = gate_axis(geom);
  const double bearing = bearing_to_exit(ue.position, geom);

  if (cfg.mode == MobilityMode::Directed) {
    ue.heading_rad = bearing;
  } else {
    double h = ue.heading_rad + rng.uniform(-cfg.heading_jitter_rad, cfg.heading_jitter_rad);
    double dev = std::clamp(wrap_angle(h - bearing), -kMaxDeviation, kMaxDeviation);
    ue.heading_rad = wrap_angle(bearing + dev);
  }

  const Vec2 p0 = ue.position;
  Vec2 p1{p0.x + ue.speed_mps * dt_s * std::cos(ue.heading_rad),
          p0.y + ue.speed_mps * dt_s * std::sin(ue.heading_rad)};

  const double s0 = progress(p0, geom, ax);
  const double s1 = progress(p1, geom, ax);
  if (s1 >= 0.0) {
    double frac = (s1 > s0) ? std::clamp(-s0 / (s1 - s0), 0.0, 1.0) : 1.0;
    ue.position = Vec2{p0.x + frac * (p1.x - p0.x), p0.y + frac * (p1.y - p0.y)};
    ue.in_gate = false;
    ue.exit_time_s = now_s + frac * dt_s;
    return;
  }

  // Reflect off the side and entrance walls.
  if (p1.y < 0.0) {
    p1.y = -p1.y;
    ue.heading_rad = wrap_angle(-ue.heading_rad);
  } else if (p1.y > geom.depth_m) {
    p1.y = 2.0 * geom.depth_m - p1.y;
    ue.heading_rad = wrap_angle(-ue.heading_rad);
  }
  if (p1.x < 0.0) {
    p1.x = -p1.x;
    ue.heading_rad = wrap_angle(kPi - ue.heading_rad);
  } else if (p1.x > geom.width_m) {
    p1.x = 2.0 * geom.width_m - p1.x;
    ue.heading_rad = wrap_angle(kPi - ue.heading_rad);
  }
  p1.x = std::clamp(p1.x, 0.0, geom.width_m);
  p1.y = std::clamp(p1.y, 0.0, geom.depth_m);

  if (progress(p1, geom, ax) >= 0.0) {
    // Reflection landed past the exit plane (skewed geometries only).
    ue.position = p1;
    ue.in_gate = false;
    ue.exit_time_s = now_s + dt_s;
    return;
  }
  ue.position = p1;
}

double expected_stay(const UserEquipment& ue, const GateGeometry& geom) {
  if (!ue.in_gate) throw NotInGate();
  return distance(ue.position, geom.exit) / ue.speed_mps;
}

}  // namespace gatesim
