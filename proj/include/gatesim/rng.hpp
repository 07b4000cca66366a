// Deterministic random streams. A run derives one named substream per
// concern (traffic, mobility, blockage) from the master seed, so changing
// the scheduler or any unrelated knob never perturbs another stream's draws.
// All distributions are generated by explicit inverse-CDF / Box-Muller from
// raw 64-bit words, so identical seeds give identical sequences on every
// platform and standard library.
#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "gatesim/util.hpp"

namespace gatesim {

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {
    // Warm up so that nearby seeds decorrelate immediately.
    next_u64();
    next_u64();
  }

  // Named substream: master seed mixed with a label hash.
  static RngStream derive(std::uint64_t master_seed, std::string_view label) {
    std::uint64_t h = fnv1a64(label);
    return RngStream(master_seed ^ (h * 0x9e3779b97f4a7c15ull));
  }

  // splitmix64 step.
  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Exponential with the given mean; uses 1-U so the argument of log is in (0,1].
  double exponential(double mean) { return -mean * std::log(1.0 - uniform01()); }

  // Box-Muller; consumes exactly two words per call.
  double normal(double mean, double sd) {
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    return mean + sd * z;
  }

 private:
  std::uint64_t state_;
};

}  // namespace gatesim
