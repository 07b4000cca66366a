// End-to-end scenario execution.
//
// Phase 1 (continuous, [0, GRT)): generate the workload; every file whose
// deadline expires before the gate starts a macro transmission at its
// deadline instant, one file at a time per user in SRTF order.
// Phase 2 (slotted, from GRT): all users enter together; per slot the engine
// samples blockage, moves users, rebuilds the capacity table, runs the
// configured scheduler, transfers bytes (residual slot capacity rolls over
// to the user's next SRTF file), and updates every in-gate user's EWMA rate.
// An in-flight macro file continues over the gate from its current byte
// position. Users exit individually; the phase ends with the last exit.
// Phase 3: each user's leftover bytes drain over the macro link from its
// exit time.
//
// One run is single-threaded and deterministic: traffic, mobility, and
// blockage each draw from an independent substream of the master seed, so
// swapping the scheduler reshuffles none of them.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gatesim/model.hpp"

namespace gatesim {

enum class EventKind {
  FileGenerated,
  DeadlineExpired,
  MacroStart,
  GateNomination,
  GateEntry,
  MmwWakeup,
  Handover,
  SlotScheduled,
  GateExit,
  MmwSleep,
  MacroResume,
  FileDone,
};

const char* to_string(EventKind k);

struct ProtocolEvent {
  double time_s = 0.0;
  EventKind kind = EventKind::FileGenerated;
  int ue_id = -1;
  int file_id = -1;  // -1 when not file-scoped
  std::string detail;
};

struct RunOptions {
  bool record_events = true;
  bool record_slot_trace = false;
};

struct RunResult {
  MetricsReport report;
  std::vector<ProtocolEvent> events;
  // Initial workload snapshot and final per-file state, per user.
  std::vector<std::vector<DelayedFile>> workload;
  std::vector<std::vector<DelayedFile>> final_files;
  std::uint64_t blockage_digest = 0;  // FNV over every slot's blockage bits
  long gate_slots = 0;
};

RunResult run(const ValidatedConfig& cfg, const RunOptions& opts = {});

// Runs the same scenario twice and compares serialized event logs and
// reports byte for byte.
bool replay_check(const ValidatedConfig& cfg);

// Event log CSV: time_s,kind,ue_id,file_id,detail.
void write_event_csv(std::span<const ProtocolEvent> events, std::ostream& os);
std::string event_csv_string(std::span<const ProtocolEvent> events);

// Slot decision trace CSV: slot,time_s,ap,ue,sinr_linear,capacity_bps,rate_bps,utility.
void write_slot_trace_csv(std::span<const SlotTraceRow> trace, std::ostream& os);

// Independent scenario runs executed on up to `jobs` threads; results come
// back in input order regardless of completion order.
std::vector<RunResult> run_batch(std::span<const ValidatedConfig> cfgs, int jobs,
                                 const RunOptions& opts = {});

}  // namespace gatesim
