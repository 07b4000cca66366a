#include <doctest.h>

#include <cmath>

#include "gatesim/mobility.hpp"
#include "support.hpp"

using namespace gatesim;
using namespace gatesim::test;

namespace {

ScenarioConfig mobility_cfg(MobilityMode mode, int ues, double ratio) {
  ScenarioConfig cfg;
  cfg.num_ues = ues;
  cfg.mobility.mode = mode;
  cfg.mobility.speed_ratio = ratio;
  return cfg;
}

}  // namespace

TEST_CASE("unit speed ratio gives everyone the mean speed") {
  auto cfg = mobility_cfg(MobilityMode::Directed, 14, 1.0);
  RngStream rng(1);
  for (const auto& ue : init_users(cfg, rng)) CHECK(ue.speed_mps == cfg.mobility.mean_speed_mps);
}

TEST_CASE("two users at ratio 2 around mean 1.5 get speeds 1 and 2") {
  auto cfg = mobility_cfg(MobilityMode::Directed, 2, 2.0);
  cfg.mobility.mean_speed_mps = 1.5;
  RngStream rng(1);
  auto ues = init_users(cfg, rng);
  CHECK(ues[0].speed_mps == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ues[1].speed_mps == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("linear speed spacing preserves the mean and the ratio") {
  auto cfg = mobility_cfg(MobilityMode::RandomWalk, 9, 5.0);
  RngStream rng(2);
  auto ues = init_users(cfg, rng);
  double sum = 0.0;
  for (const auto& ue : ues) sum += ue.speed_mps;
  CHECK(sum / 9.0 == doctest::Approx(cfg.mobility.mean_speed_mps).epsilon(1e-12));
  CHECK(ues.back().speed_mps / ues.front().speed_mps == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("users start jittered around the entrance, all distinct, in gate") {
  auto cfg = mobility_cfg(MobilityMode::RandomWalk, 14, 1.0);
  RngStream rng(3);
  auto ues = init_users(cfg, rng);
  for (std::size_t i = 0; i < ues.size(); ++i) {
    CHECK(ues[i].in_gate);
    CHECK(distance(ues[i].position, cfg.gate.entrance) <= 0.5 + 1e-12);
    for (std::size_t j = i + 1; j < ues.size(); ++j)
      CHECK(!(ues[i].position == ues[j].position));
  }
}

TEST_CASE("a zero-length step changes nothing") {
  auto cfg = mobility_cfg(MobilityMode::RandomWalk, 1, 1.0);
  RngStream rng(4);
  auto ues = init_users(cfg, rng);
  const Vec2 before = ues[0].position;
  step(ues[0], 0.0, 0.0, cfg.gate, cfg.mobility, rng);
  CHECK(ues[0].position == before);
  CHECK(ues[0].in_gate);
}

TEST_CASE("directed walk crosses a 20 m gate at 5 km/h in about 14.4 s") {
  auto cfg = mobility_cfg(MobilityMode::Directed, 1, 1.0);
  RngStream rng(5);
  auto ues = init_users(cfg, rng);
  ues[0].position = cfg.gate.entrance;  // pin to the exact midpoint
  double t = 0.0;
  int guard = 0;
  while (ues[0].in_gate && guard++ < 10000) {
    step(ues[0], cfg.slot_s, t, cfg.gate, cfg.mobility, rng);
    t += cfg.slot_s;
  }
  REQUIRE(!ues[0].in_gate);
  CHECK(std::abs(ues[0].exit_time_s - 14.40) <= cfg.slot_s);
}

TEST_CASE("every random walk leaves the gate and stays inside the box meanwhile") {
  auto cfg = mobility_cfg(MobilityMode::RandomWalk, 1, 1.0);
  for (int seed = 0; seed < 1000; ++seed) {
    RngStream rng(static_cast<std::uint64_t>(seed));
    auto ues = init_users(cfg, rng);
    double t = 0.0;
    int steps = 0;
    const int cap = 40000;  // ~2 min of simulated walking; typical exit ~15 s
    while (ues[0].in_gate && steps < cap) {
      step(ues[0], cfg.slot_s, t, cfg.gate, cfg.mobility, rng);
      t += cfg.slot_s;
      ++steps;
      if (ues[0].in_gate) {
        CHECK(ues[0].position.x >= 0.0);
        CHECK(ues[0].position.x <= cfg.gate.width_m);
        CHECK(ues[0].position.y >= 0.0);
        CHECK(ues[0].position.y <= cfg.gate.depth_m);
      }
    }
    REQUIRE(!ues[0].in_gate);
  }
}

TEST_CASE("expected stay is distance over speed") {
  auto cfg = mobility_cfg(MobilityMode::Directed, 1, 1.0);
  RngStream rng(6);
  auto ues = init_users(cfg, rng);
  ues[0].position = Vec2{10.0, 5.0};  // 10 m from the exit point
  CHECK(expected_stay(ues[0], cfg.gate) == doctest::Approx(7.2).epsilon(1e-9));

  ues[0].speed_mps *= 2.0;
  CHECK(expected_stay(ues[0], cfg.gate) == doctest::Approx(3.6).epsilon(1e-12));

  ues[0].position = cfg.gate.exit;
  CHECK(expected_stay(ues[0], cfg.gate) == 0.0);

  ues[0].in_gate = false;
  CHECK_THROWS_AS(expected_stay(ues[0], cfg.gate), NotInGate);
}

TEST_CASE("stay time is non-increasing along a directed trajectory") {
  auto cfg = mobility_cfg(MobilityMode::Directed, 1, 1.0);
  RngStream rng(7);
  auto ues = init_users(cfg, rng);
  double prev = expected_stay(ues[0], cfg.gate);
  double t = 0.0;
  while (ues[0].in_gate) {
    step(ues[0], cfg.slot_s, t, cfg.gate, cfg.mobility, rng);
    t += cfg.slot_s;
    if (!ues[0].in_gate) break;
    const double ts = expected_stay(ues[0], cfg.gate);
    CHECK(ts <= prev + 1e-12);
    prev = ts;
  }
}

TEST_CASE("stay-time ratio at the same spot equals the speed ratio") {
  auto cfg = mobility_cfg(MobilityMode::Directed, 2, 4.0);
  RngStream rng(8);
  auto ues = init_users(cfg, rng);
  ues[1].position = ues[0].position;
  const double slow = expected_stay(ues[0], cfg.gate);
  const double fast = expected_stay(ues[1], cfg.gate);
  CHECK(slow / fast == doctest::Approx(4.0).epsilon(1e-12));
}
