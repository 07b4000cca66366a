// Delayed-file workload generation and per-user file-table queries.
//
// Each user's files arrive as a Poisson process over the pre-gate window
// [0, GRT); sizes are exponential; deadlines come from a Gaussian with mean
// rho*(GRT - FAT) and sd delta_frac*(GRT - FAT), truncated at zero relative
// deadline (a clamped draw means "send immediately over the macro cell").
#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "gatesim/model.hpp"
#include "gatesim/rng.hpp"

namespace gatesim {

struct TrafficParams {
  double mean_file_bytes = 1.62e9;
  double mean_iat_s = 600.0;
  double window_s = 1800.0;  // generation window; equals GRT
  double rho = 1.5;
  double delta_frac = 0.1;
};

TrafficParams traffic_params_from(const ScenarioConfig& cfg);

// One file list per user, ordered by arrival time. File ids are unique
// across the whole workload. Pure in (params, ue_count, rng state).
std::vector<std::vector<DelayedFile>> generate_workload(const TrafficParams& params, int ue_count,
                                                        RngStream& rng);

// Absolute deadline for a file arriving at fat_s. Throws std::invalid_argument
// if fat_s is outside [0, grt_s].
double draw_deadline(double fat_s, double grt_s, double rho, double delta_frac, RngStream& rng);

// SRTF front of the table at time now_s: among files with data remaining and
// fat <= now, the smallest (deadline - now); ties by remaining bytes, then id.
// With SrtfOrder::Size the primary key is remaining bytes instead.
const DelayedFile* next_file(std::span<const DelayedFile> table, double now_s,
                             SrtfOrder order = SrtfOrder::Deadline);
DelayedFile* next_file_mut(std::span<DelayedFile> table, double now_s,
                           SrtfOrder order = SrtfOrder::Deadline);

// L_k: bytes still pending across files that have arrived by now_s.
std::int64_t total_remaining(std::span<const DelayedFile> table, double now_s);

// Workload dump/load, one line per file: ue_id,file_id,fat_s,total_bytes,deadline_s.
// Users without files leave no rows, so readers that care pass ue_count.
void write_workload_csv(std::span<const std::vector<DelayedFile>> workload, std::ostream& os);
std::vector<std::vector<DelayedFile>> read_workload_csv(std::istream& is, int ue_count = 0);

}  // namespace gatesim
