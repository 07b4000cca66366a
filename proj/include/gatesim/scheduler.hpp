// Slot-level user selection. WPF scores each candidate link with
// U = (r/R) * w^alpha, where r = min(C, 8 L / T_sl) is the instantaneous
// rate, R the EWMA average rate, and w = TS_h / TS_k the inverse normalized
// expected stay. alpha = 0 reduces to conventional PF. Multi-AP selection
// maximizes the utility sum over every injective AP->UE mapping, evaluated
// exhaustively against the slot's capacity table. Round-robin ignores
// utilities and cycles users by id.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gatesim/channel.hpp"
#include "gatesim/model.hpp"

namespace gatesim {

class DegenerateStay : public std::logic_error {
 public:
  DegenerateStay() : std::logic_error("priority_weight: zero stay time") {}
};

struct UeSchedInput {
  int ue_id = 0;
  std::int64_t remaining_bytes = 0;  // L_k, whole file table
  double avg_rate_bps = 0.0;         // R_k
  double stay_s = 0.0;               // TS_k
  bool eligible = false;             // in gate with data to send
  double single_ap_rate_bps = 0.0;   // r_k candidate for the 1-AP rule
};

struct SchedulerInputs {
  long slot = 0;
  double slot_s = 0.003;
  double alpha = 1.0;
  int n_c = 100;
  double ts_h_s = 0.0;  // longest expected stay in the current pool
  std::vector<UeSchedInput> ues;  // ascending ue_id
};

// r_k = min(C_k, 8 L_k / T_sl), bits/s.
double inst_rate_bps(double capacity_bps, std::int64_t remaining_bytes, double slot_s);

// w_k = TS_h / TS_k. Throws DegenerateStay at ts_k = 0.
double priority_weight(double ts_k_s, double ts_h_s);

// Weights for a whole pool; a zero-stay entry gets the largest finite
// weight present (or 1 if it is alone) instead of infinity.
std::vector<double> priority_weights(std::span<const double> ts_s, double ts_h_s);

// U_k = (r/R) * w^alpha.
double utility(double r_bps, double avg_rate_bps, double weight, double alpha);

// EWMA update: R <- (1 - 1/Nc) R + (1/Nc) r a.
double update_avg_rate(double r_prev_bps, double r_bps, bool scheduled, int n_c);

// 1-AP rule: argmax U over eligible users with r > 0; ties to the lowest
// ue_id; nullopt when nobody can send.
std::optional<int> select_single(const SchedulerInputs& inputs);

// Multi-AP rule: exhaustive argmax of sum-utility over the capacity table's
// injective mappings (idle APs allowed). Ties resolve to the first mapping
// in lexicographic order (per AP: pool users ascending, idle last).
Assignment select_multi(const SchedulerInputs& inputs, const CapacityTable& table, int num_aps);

// Serves the next num_aps eligible users in cyclic ue_id order after
// cursor_ue_id (-1 to start at the lowest id); pairs each selected user
// with its nearest unassigned AP; advances the cursor to the last user
// served. Utilities are still reported for tracing.
Assignment round_robin(const SchedulerInputs& inputs, const CapacityTable& table, int num_aps,
                       int& cursor_ue_id);

}  // namespace gatesim
