// Shared test helpers: small scenario builders, sample statistics, and an
// independent brute-force re-derivation of the multi-AP selection used as
// the oracle for the exhaustive scheduler. The oracle recomputes the whole
// link budget from first principles on purpose; it must not call into the
// channel/scheduler implementation it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gatesim/model.hpp"

namespace gatesim::test {

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// A quick scenario that runs in a few milliseconds.
inline ScenarioConfig small_scenario() {
  ScenarioConfig cfg;
  cfg.num_aps = 2;
  cfg.num_ues = 4;
  cfg.grt_s = 120.0;
  cfg.mean_iat_s = 40.0;
  cfg.mean_file_bytes = 4e7;
  cfg.rng_seed = 7;
  return cfg;
}

// ---------------------------------------------------------------------------
// Brute-force selection oracle.

struct OracleUe {
  Vec2 position;
  std::int64_t remaining_bytes = 0;
  double avg_rate_bps = 1.0;
  double stay_s = 1.0;
};

struct OracleInstance {
  std::vector<Vec3> aps;
  std::vector<OracleUe> ues;
  std::vector<std::uint8_t> blocked;  // [ap][ue]
  double tx_dbm = 10.0;
  double carrier_hz = 60e9;
  double pathloss_exponent = 2.0;
  double main_gain_db = 15.0;
  double side_gain_db = -5.0;
  double blockage_loss_db = 25.0;
  double noise_figure_db = 10.0;
  double bandwidth_hz = 2.16e9;
  double bw_eff = 0.7;
  double snr_eff = 1.0;
  double slot_s = 0.003;
  double alpha = 1.0;
  double ts_h_s = 1.0;
};

struct OracleBest {
  std::vector<int> ap_to_ue;  // ue id per ap, -1 idle
  double sum = 0.0;
};

inline OracleBest oracle_best_assignment(const OracleInstance& in) {
  const int a_count = static_cast<int>(in.aps.size());
  const int k = static_cast<int>(in.ues.size());

  auto blocked = [&](int a, int u) {
    return in.blocked[static_cast<std::size_t>(a) * static_cast<std::size_t>(k) +
                      static_cast<std::size_t>(u)] != 0;
  };
  auto pl_db = [&](int a, int u) {
    const Vec3& ap = in.aps[static_cast<std::size_t>(a)];
    const Vec2& ue = in.ues[static_cast<std::size_t>(u)].position;
    double d = std::sqrt((ap.x - ue.x) * (ap.x - ue.x) + (ap.y - ue.y) * (ap.y - ue.y) +
                         ap.z * ap.z);
    d = std::max(d, 0.1);
    return 20.0 * std::log10(4.0 * M_PI * in.carrier_hz / 299792458.0) +
           10.0 * in.pathloss_exponent * std::log10(d);
  };
  auto mw = [](double dbm) { return std::pow(10.0, dbm / 10.0); };
  const double noise_mw = mw(-174.0 + 10.0 * std::log10(in.bandwidth_hz) + in.noise_figure_db);

  auto utility_of = [&](int a, int u, const std::vector<int>& mapping) {
    double sig = in.tx_dbm + 2.0 * in.main_gain_db - pl_db(a, u);
    if (blocked(a, u)) sig -= in.blockage_loss_db;
    double interf = 0.0;
    for (int j = 0; j < a_count; ++j) {
      if (j == a || mapping[static_cast<std::size_t>(j)] < 0) continue;
      double p = in.tx_dbm + 2.0 * in.side_gain_db - pl_db(j, u);
      if (blocked(j, u)) p -= in.blockage_loss_db;
      interf += mw(p);
    }
    const double sinr = mw(sig) / (interf + noise_mw);
    const double cap = in.bw_eff * in.bandwidth_hz * std::log2(1.0 + sinr / in.snr_eff);
    const OracleUe& ue = in.ues[static_cast<std::size_t>(u)];
    const double r =
        std::min(cap, 8.0 * static_cast<double>(ue.remaining_bytes) / in.slot_s);
    const double w = in.ts_h_s / ue.stay_s;
    return (r / ue.avg_rate_bps) * std::pow(w, in.alpha);
  };

  OracleBest best;
  best.ap_to_ue.assign(static_cast<std::size_t>(a_count), -1);
  best.sum = -1.0;

  std::vector<int> mapping(static_cast<std::size_t>(a_count), -1);
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  // Same lexicographic visit order as the implementation documents:
  // per AP, users ascending, idle last; first strict improvement wins.
  auto rec = [&](auto&& self, int a) -> void {
    if (a == a_count) {
      double sum = 0.0;
      for (int i = 0; i < a_count; ++i) {
        const int u = mapping[static_cast<std::size_t>(i)];
        if (u >= 0) sum += utility_of(i, u, mapping);
      }
      if (sum > best.sum) {
        best.sum = sum;
        best.ap_to_ue = mapping;
      }
      return;
    }
    for (int u = 0; u < k; ++u) {
      if (used[static_cast<std::size_t>(u)]) continue;
      if (in.ues[static_cast<std::size_t>(u)].remaining_bytes <= 0) continue;
      used[static_cast<std::size_t>(u)] = 1;
      mapping[static_cast<std::size_t>(a)] = u;
      self(self, a + 1);
      used[static_cast<std::size_t>(u)] = 0;
    }
    mapping[static_cast<std::size_t>(a)] = -1;
    self(self, a + 1);
  };
  rec(rec, 0);
  return best;
}

}  // namespace gatesim::test
