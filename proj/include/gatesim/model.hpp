// Shared domain types and scenario configuration. Every quantity that the
// rest of the simulator consumes lives here: counts, rates, geometry, the
// per-file and per-user state, and the per-slot assignment record.
//
// Unit conventions: byte quantities are 64-bit integers of bytes, rates are
// double bits/s, times are double seconds, powers/gains are dB(m) doubles.
#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gatesim/geometry.hpp"

namespace gatesim {

enum class SchedulerKind { Wpf, Pf, Rr };
enum class MobilityMode { RandomWalk, Directed };
// Transmission order of a user's file table. Deadline = earliest remaining
// deadline first (default); Size = smallest remaining size first.
enum class SrtfOrder { Deadline, Size };
// Stay-time horizon TS_h: Dynamic = max stay over currently in-gate users,
// recomputed each slot; Static = entry-time stay of the slowest user.
enum class TsHorizonMode { Dynamic, Static };

const char* to_string(SchedulerKind k);
const char* to_string(MobilityMode m);
const char* to_string(SrtfOrder o);
const char* to_string(TsHorizonMode m);

struct GateGeometry {
  double width_m = 20.0;  // entrance side to exit side
  double depth_m = 10.0;
  Vec2 entrance{0.0, 5.0};  // midpoint of the entrance side
  Vec2 exit{20.0, 5.0};     // midpoint of the exit side
  // Ceiling-mounted AP coordinates. Empty means "auto": validate() fills
  // num_aps positions evenly spaced along the centerline at ap_height_m.
  std::vector<Vec3> ap_positions;
  double ap_height_m = 3.0;

  friend bool operator==(const GateGeometry&, const GateGeometry&) = default;
};

struct MobilityConfig {
  MobilityMode mode = MobilityMode::RandomWalk;
  double mean_speed_mps = 5.0 / 3.6;  // 5 km/h
  double speed_ratio = 1.0;           // fastest / slowest user speed
  double heading_jitter_rad = 0.3;    // random-walk per-step heading noise

  friend bool operator==(const MobilityConfig&, const MobilityConfig&) = default;
};

struct ChannelConfig {
  double carrier_hz = 60e9;
  double main_lobe_gain_db = 15.0;  // per antenna end
  double side_lobe_gain_db = -5.0;
  double noise_figure_db = 10.0;
  double blockage_prob_max = 0.2;  // per-link probability drawn U(0, max) at entry
  double blockage_loss_db = 25.0;
  double pathloss_exponent = 2.0;  // free-space reference at 1 m

  friend bool operator==(const ChannelConfig&, const ChannelConfig&) = default;
};

struct EnergyConfig {
  double ue_power_mmw_w = 2.0;    // UE mmW module active power
  double ue_power_macro_w = 2.0;  // UE cellular module active power

  friend bool operator==(const EnergyConfig&, const EnergyConfig&) = default;
};

struct ScenarioConfig {
  int num_aps = 4;       // 1..4
  int num_ues = 14;
  double grt_s = 1800.0;  // gate reaching time
  double slot_s = 0.003;
  double mean_file_bytes = 1.62e9;
  double mean_iat_s = 600.0;
  double rho = 1.5;         // deadline mean multiplier
  double delta_frac = 0.1;  // deadline sd as a fraction of (GRT - FAT)
  double macro_rate_bps = 1e8;
  double macro_tx_dbm = 46.0;  // informational; macro is modeled as fixed-rate
  double ap_tx_dbm = 10.0;
  double ap_bandwidth_hz = 2.16e9;
  double bw_eff = 0.7;
  double snr_eff = 1.0;
  double alpha = 1.0;        // utility weight exponent in [0,1]; 0 reduces to PF
  int n_c = 100;             // EWMA window, slots
  double r_init_bps = 1e3;   // average-rate seed for new entrants
  GateGeometry gate;
  MobilityConfig mobility;
  ChannelConfig channel;
  EnergyConfig energy;
  SchedulerKind scheduler = SchedulerKind::Wpf;
  SrtfOrder srtf_order = SrtfOrder::Deadline;
  TsHorizonMode ts_h_mode = TsHorizonMode::Dynamic;
  std::uint64_t rng_seed = 1;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Thrown by validate(); carries one message per violated constraint.
class InvalidConfig : public std::runtime_error {
 public:
  explicit InvalidConfig(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues);
  std::vector<std::string> issues_;
};

class ValidatedConfig;

// Checks every invariant, fills derived defaults (auto AP layout) and
// returns the sealed config. Reports all violations at once.
ValidatedConfig validate(ScenarioConfig cfg);

class ValidatedConfig {
 public:
  const ScenarioConfig& operator*() const { return cfg_; }
  const ScenarioConfig* operator->() const { return &cfg_; }
  const ScenarioConfig& get() const { return cfg_; }

 private:
  friend ValidatedConfig validate(ScenarioConfig);
  explicit ValidatedConfig(ScenarioConfig cfg) : cfg_(std::move(cfg)) {}
  ScenarioConfig cfg_;
};

enum class FileState { Pending, MacroActive, GateActive, Done };

struct DelayedFile {
  int id = 0;
  int owner_ue = 0;
  std::int64_t total_bytes = 0;
  std::int64_t remaining_bytes = 0;
  double fat_s = 0.0;       // file arrival time
  double deadline_s = 0.0;  // absolute simulation time
  std::int64_t bytes_via_gate = 0;
  std::int64_t bytes_via_macro = 0;
  FileState state = FileState::Pending;

  friend bool operator==(const DelayedFile&, const DelayedFile&) = default;
};

struct UserEquipment {
  int id = 0;
  Vec2 position{};
  double heading_rad = 0.0;
  double speed_mps = 0.0;  // constant per user
  std::vector<DelayedFile> files;
  std::int64_t alloc_slots = 0;      // A_k
  std::int64_t bytes_offloaded = 0;  // BO_k
  double avg_rate_bps = 0.0;         // R_k
  bool in_gate = false;
  double exit_time_s = std::numeric_limits<double>::quiet_NaN();
};

struct AssignedLink {
  int ap_id = 0;
  int ue_id = 0;
  double sinr_linear = 0.0;
  double capacity_bps = 0.0;
  double rate_bps = 0.0;
  double utility = 0.0;
};

// One slot's AP->UE mapping; injective in both directions by construction.
struct Assignment {
  std::vector<AssignedLink> links;  // ascending ap_id
  double total_utility = 0.0;

  bool serves(int ue_id) const;
  const AssignedLink* link_for_ue(int ue_id) const;
};

struct UserRow {
  int ue_id = 0;
  std::int64_t alloc_slots = 0;
  std::int64_t bytes_offloaded = 0;
  double stay_s = 0.0;
  double speed_mps = 0.0;
};

struct SlotTraceRow {
  long slot = 0;
  double time_s = 0.0;
  int ap_id = 0;
  int ue_id = 0;
  double sinr_linear = 0.0;
  double capacity_bps = 0.0;
  double rate_bps = 0.0;
  double utility = 0.0;
};

struct MetricsReport {
  double gofe = std::numeric_limits<double>::quiet_NaN();
  double f_alloc = std::numeric_limits<double>::quiet_NaN();
  double f_byte = std::numeric_limits<double>::quiet_NaN();
  double norm_energy = std::numeric_limits<double>::quiet_NaN();
  std::int64_t total_generated_bytes = 0;
  std::int64_t bytes_via_gate = 0;
  std::int64_t bytes_via_macro = 0;
  double gate_active_s = 0.0;  // sum over users of A_k * T_sl
  double macro_busy_s = 0.0;   // macro transmit seconds, phases 1 and 3
  std::vector<UserRow> users;
  std::vector<SlotTraceRow> slot_trace;  // filled only when tracing is on
};

}  // namespace gatesim
