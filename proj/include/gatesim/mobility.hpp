// User placement and motion through the gate, plus the expected stay time
// TS_k = d_k / v_k that feeds the scheduler's priority weight.
#pragma once

#include <stdexcept>
#include <vector>

#include "gatesim/model.hpp"
#include "gatesim/rng.hpp"

namespace gatesim {

class NotInGate : public std::logic_error {
 public:
  NotInGate() : std::logic_error("expected_stay: user already left the gate") {}
};

// Users start at the entrance (lateral jitter up to 0.5 m), heading at the
// exit, speeds spaced linearly so that max/min = speed_ratio and the mean is
// mean_speed_mps. avg_rate_bps is seeded with r_init_bps.
std::vector<UserEquipment> init_users(const ScenarioConfig& cfg, RngStream& rng);

// Advance one user by dt_s starting at now_s. RandomWalk perturbs the
// heading by U(-jitter, +jitter) and then clamps it around the bearing to
// the exit so every step makes progress; Directed heads straight for the
// exit. Walls reflect. Crossing the exit plane clears in_gate and records
// the interpolated crossing time in exit_time_s.
void step(UserEquipment& ue, double dt_s, double now_s, const GateGeometry& geom,
          const MobilityConfig& cfg, RngStream& rng);

// TS_k: straight-line distance to the exit point over the user's speed.
// Throws NotInGate after exit.
double expected_stay(const UserEquipment& ue, const GateGeometry& geom);

}  // namespace gatesim
