#include "gatesim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <thread>

#include "gatesim/channel.hpp"
#include "gatesim/metrics.hpp"
#include "gatesim/mobility.hpp"
#include "gatesim/rng.hpp"
#include "gatesim/scheduler.hpp"
#include "gatesim/traffic.hpp"
#include "gatesim/util.hpp"

namespace gatesim {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::FileGenerated: return "FileGenerated";
    case EventKind::DeadlineExpired: return "DeadlineExpired";
    case EventKind::MacroStart: return "MacroStart";
    case EventKind::GateNomination: return "GateNomination";
    case EventKind::GateEntry: return "GateEntry";
    case EventKind::MmwWakeup: return "MmwWakeup";
    case EventKind::Handover: return "Handover";
    case EventKind::SlotScheduled: return "SlotScheduled";
    case EventKind::GateExit: return "GateExit";
    case EventKind::MmwSleep: return "MmwSleep";
    case EventKind::MacroResume: return "MacroResume";
    case EventKind::FileDone: return "FileDone";
  }
  return "?";
}

namespace {

constexpr long kMaxGateSlots = 50'000'000;

class SimRun {
 public:
  SimRun(const ValidatedConfig& vcfg, const RunOptions& opts)
      : cfg_(*vcfg), opts_(opts) {}

  RunResult execute() {
    phase1_pre_gate();
    phase2_gate();
    phase3_drain();
    finish();
    return std::move(result_);
  }

 private:
  void emit(double t, EventKind kind, int ue, int file = -1, std::string detail = {}) {
    if (!opts_.record_events) return;
    result_.events.push_back(ProtocolEvent{t, kind, ue, file, std::move(detail)});
  }

  // Phase 1: workload generation plus macro service of files whose
  // deadlines expire before the gate. One macro link per user; a started
  // file is never preempted (later expiries always have later deadlines).
  void phase1_pre_gate() {
    RngStream traffic_rng = RngStream::derive(cfg_.rng_seed, "traffic");
    auto workload = generate_workload(traffic_params_from(cfg_), cfg_.num_ues, traffic_rng);
    result_.workload = workload;

    RngStream mobility_rng = RngStream::derive(cfg_.rng_seed, "mobility");
    ues_ = init_users(cfg_, mobility_rng);
    mobility_rng_ = mobility_rng;  // continue the same stream during the gate phase

    const double grt = cfg_.grt_s;
    in_flight_.assign(static_cast<std::size_t>(cfg_.num_ues), -1);
    for (auto& ue : ues_) {
      auto& files = workload[static_cast<std::size_t>(ue.id)];
      emit(0.0, EventKind::GateNomination, ue.id, -1, "grt=" + fmt_double(grt));
      for (const auto& f : files) {
        emit(f.fat_s, EventKind::FileGenerated, ue.id, f.id,
             "bytes=" + std::to_string(f.total_bytes));
        if (f.deadline_s < grt) emit(f.deadline_s, EventKind::DeadlineExpired, ue.id, f.id);
      }

      // Deadline-expired files in SRTF order (remaining == total at expiry).
      std::vector<DelayedFile*> expired;
      for (auto& f : files)
        if (f.deadline_s < grt) expired.push_back(&f);
      std::sort(expired.begin(), expired.end(), [](const DelayedFile* a, const DelayedFile* b) {
        if (a->deadline_s != b->deadline_s) return a->deadline_s < b->deadline_s;
        if (a->total_bytes != b->total_bytes) return a->total_bytes < b->total_bytes;
        return a->id < b->id;
      });

      double link_free_at = 0.0;
      for (DelayedFile* f : expired) {
        const double start = std::max(link_free_at, f->deadline_s);
        if (start >= grt) break;
        emit(start, EventKind::MacroStart, ue.id, f->id);
        f->state = FileState::MacroActive;
        const double full_s =
            static_cast<double>(f->remaining_bytes) * 8.0 / cfg_.macro_rate_bps;
        if (start + full_s <= grt) {
          f->bytes_via_macro += f->remaining_bytes;
          f->remaining_bytes = 0;
          f->state = FileState::Done;
          emit(start + full_s, EventKind::FileDone, ue.id, f->id);
          link_free_at = start + full_s;
        } else {
          auto sent = static_cast<std::int64_t>(
              std::floor((grt - start) * cfg_.macro_rate_bps / 8.0));
          sent = std::clamp<std::int64_t>(sent, 0, f->remaining_bytes);
          f->bytes_via_macro += sent;
          f->remaining_bytes -= sent;
          in_flight_[static_cast<std::size_t>(ue.id)] = f->id;
          link_free_at = grt;
          break;  // macro busy until gate entry
        }
      }

      ue.files = std::move(files);
      remaining_total_.push_back(total_remaining(ue.files, grt));
    }
  }

  // Phase 2: the slotted gate period.
  void phase2_gate() {
    const double grt = cfg_.grt_s;
    const int num_aps = cfg_.num_aps;
    const int num_ues = cfg_.num_ues;
    std::span<const Vec3> aps(cfg_.gate.ap_positions.data(), static_cast<std::size_t>(num_aps));
    const RadioParams radio = make_radio_params(cfg_);

    for (const auto& ue : ues_) {
      emit(grt, EventKind::MmwWakeup, ue.id);
      emit(grt, EventKind::GateEntry, ue.id);
      const int fid = in_flight_[static_cast<std::size_t>(ue.id)];
      if (fid >= 0) emit(grt, EventKind::Handover, ue.id, fid, "macro_to_gate");
    }

    RngStream blockage_rng = RngStream::derive(cfg_.rng_seed, "blockage");
    BlockageModel blockage_model(num_aps, num_ues, cfg_.channel, blockage_rng);

    double ts_h_static = 0.0;
    for (const auto& ue : ues_) ts_h_static = std::max(ts_h_static, expected_stay(ue, cfg_.gate));

    int rr_cursor = -1;
    double t = grt;
    long slot = 0;
    std::vector<int> pool;
    pool.reserve(static_cast<std::size_t>(num_ues));

    while (true) {
      bool any_in_gate = false;
      for (const auto& ue : ues_)
        if (ue.in_gate) {
          any_in_gate = true;
          break;
        }
      if (!any_in_gate) break;
      if (slot >= kMaxGateSlots)
        throw std::logic_error("gate phase exceeded the slot budget; mobility is stuck");

      const BlockageState blockage = blockage_model.sample_slot(blockage_rng);
      result_.blockage_digest = fnv1a64(
          std::string_view(reinterpret_cast<const char*>(blockage.blocked.data()),
                           blockage.blocked.size()),
          result_.blockage_digest ? result_.blockage_digest : 0xcbf29ce484222325ull);

      for (auto& ue : ues_) {
        if (!ue.in_gate) continue;
        step(ue, cfg_.slot_s, t, cfg_.gate, cfg_.mobility, mobility_rng_);
        if (!ue.in_gate) {
          emit(ue.exit_time_s, EventKind::GateExit, ue.id);
          emit(ue.exit_time_s, EventKind::MmwSleep, ue.id);
        }
      }

      pool.clear();
      for (const auto& ue : ues_)
        if (ue.in_gate) pool.push_back(ue.id);

      if (!pool.empty()) {
        const CapacityTable table =
            CapacityTable::build(aps, ues_, pool, blockage, radio);

        SchedulerInputs inputs;
        inputs.slot = slot;
        inputs.slot_s = cfg_.slot_s;
        inputs.alpha = (cfg_.scheduler == SchedulerKind::Pf) ? 0.0 : cfg_.alpha;
        inputs.n_c = cfg_.n_c;
        double ts_h_dyn = 0.0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
          const auto& ue = ues_[static_cast<std::size_t>(pool[i])];
          UeSchedInput row;
          row.ue_id = ue.id;
          row.remaining_bytes = remaining_total_[static_cast<std::size_t>(ue.id)];
          row.avg_rate_bps = ue.avg_rate_bps;
          row.stay_s = expected_stay(ue, cfg_.gate);
          row.eligible = row.remaining_bytes > 0;
          if (num_aps == 1)
            row.single_ap_rate_bps =
                inst_rate_bps(table.link_capacity_bps(0, static_cast<int>(i), 1u),
                              row.remaining_bytes, cfg_.slot_s);
          inputs.ues.push_back(row);
          ts_h_dyn = std::max(ts_h_dyn, row.stay_s);
        }
        inputs.ts_h_s =
            (cfg_.ts_h_mode == TsHorizonMode::Dynamic) ? ts_h_dyn : ts_h_static;

        const Assignment assignment =
            (cfg_.scheduler == SchedulerKind::Rr)
                ? round_robin(inputs, table, num_aps, rr_cursor)
                : select_multi(inputs, table, num_aps);

        apply_transfers(assignment, t, slot);
        update_avg_rates(assignment, pool);
      }

      t += cfg_.slot_s;
      ++slot;
    }
    result_.gate_slots = slot;
  }

  void apply_transfers(const Assignment& assignment, double t, long slot) {
    for (const auto& link : assignment.links) {
      auto& ue = ues_[static_cast<std::size_t>(link.ue_id)];
      auto budget = static_cast<std::int64_t>(std::floor(link.rate_bps * cfg_.slot_s / 8.0));
      budget = std::min(budget, remaining_total_[static_cast<std::size_t>(ue.id)]);

      int first_file = -1;
      std::int64_t left = budget;
      while (left > 0) {
        DelayedFile* f = next_file_mut(std::span<DelayedFile>(ue.files), t, cfg_.srtf_order);
        if (!f) break;
        if (first_file < 0) first_file = f->id;
        const std::int64_t take = std::min(left, f->remaining_bytes);
        f->remaining_bytes -= take;
        f->bytes_via_gate += take;
        left -= take;
        remaining_total_[static_cast<std::size_t>(ue.id)] -= take;
        if (f->remaining_bytes == 0) {
          f->state = FileState::Done;
          emit(t + cfg_.slot_s, EventKind::FileDone, ue.id, f->id);
        } else {
          f->state = FileState::GateActive;
        }
      }

      ue.alloc_slots += 1;
      ue.bytes_offloaded += budget - left;
      emit(t, EventKind::SlotScheduled, ue.id, first_file,
           "ap=" + std::to_string(link.ap_id) + ";rate_bps=" + fmt_double(link.rate_bps));
      if (opts_.record_slot_trace)
        result_.report.slot_trace.push_back(SlotTraceRow{slot, t, link.ap_id, link.ue_id,
                                                         link.sinr_linear, link.capacity_bps,
                                                         link.rate_bps, link.utility});
    }
  }

  void update_avg_rates(const Assignment& assignment, const std::vector<int>& pool) {
    for (int ue_id : pool) {
      auto& ue = ues_[static_cast<std::size_t>(ue_id)];
      const AssignedLink* link = assignment.link_for_ue(ue_id);
      ue.avg_rate_bps =
          update_avg_rate(ue.avg_rate_bps, link ? link->rate_bps : 0.0, link != nullptr, cfg_.n_c);
    }
  }

  // Phase 3: whatever is left drains over the macro link per user.
  void phase3_drain() {
    for (auto& ue : ues_) {
      if (remaining_total_[static_cast<std::size_t>(ue.id)] <= 0) continue;
      double tt = ue.exit_time_s;
      emit(tt, EventKind::MacroResume, ue.id, -1,
           "remaining=" + std::to_string(remaining_total_[static_cast<std::size_t>(ue.id)]));
      while (true) {
        DelayedFile* f = next_file_mut(std::span<DelayedFile>(ue.files), tt, cfg_.srtf_order);
        if (!f) break;
        emit(tt, EventKind::MacroStart, ue.id, f->id);
        const double dur = static_cast<double>(f->remaining_bytes) * 8.0 / cfg_.macro_rate_bps;
        f->bytes_via_macro += f->remaining_bytes;
        remaining_total_[static_cast<std::size_t>(ue.id)] -= f->remaining_bytes;
        f->remaining_bytes = 0;
        f->state = FileState::Done;
        emit(tt + dur, EventKind::FileDone, ue.id, f->id);
        tt += dur;
      }
    }
  }

  void finish() {
    auto& rep = result_.report;
    for (const auto& ue : ues_) {
      for (const auto& f : ue.files) {
        rep.total_generated_bytes += f.total_bytes;
        rep.bytes_via_gate += f.bytes_via_gate;
        rep.bytes_via_macro += f.bytes_via_macro;
        if (f.bytes_via_gate + f.bytes_via_macro + f.remaining_bytes != f.total_bytes)
          throw std::logic_error("byte conservation violated for file " + std::to_string(f.id));
      }
      rep.users.push_back(UserRow{ue.id, ue.alloc_slots, ue.bytes_offloaded,
                                  ue.exit_time_s - cfg_.grt_s, ue.speed_mps});
      rep.gate_active_s += static_cast<double>(ue.alloc_slots) * cfg_.slot_s;
    }
    rep.macro_busy_s = static_cast<double>(rep.bytes_via_macro) * 8.0 / cfg_.macro_rate_bps;

    std::vector<std::int64_t> alloc, bo;
    for (const auto& u : rep.users) {
      alloc.push_back(u.alloc_slots);
      bo.push_back(u.bytes_offloaded);
    }
    try {
      rep.f_alloc = allocation_fairness(alloc);
    } catch (const std::domain_error&) {
    }
    try {
      rep.f_byte = byte_fairness(bo);
    } catch (const std::domain_error&) {
    }
    try {
      rep.gofe = gofe(rep.bytes_via_gate, rep.total_generated_bytes);
      rep.norm_energy = normalized_energy(rep, cfg_.energy, cfg_);
    } catch (const std::domain_error&) {
    }

    for (auto& ue : ues_) result_.final_files.push_back(std::move(ue.files));
    if (opts_.record_events)
      std::stable_sort(result_.events.begin(), result_.events.end(),
                       [](const ProtocolEvent& a, const ProtocolEvent& b) {
                         return a.time_s < b.time_s;
                       });
  }

  const ScenarioConfig& cfg_;
  RunOptions opts_;
  RunResult result_;
  std::vector<UserEquipment> ues_;
  std::vector<std::int64_t> remaining_total_;
  std::vector<int> in_flight_;
  RngStream mobility_rng_{0};
};

std::string report_to_string(const MetricsReport& rep) {
  std::ostringstream os;
  os << "gofe=" << fmt_double(rep.gofe) << " f_alloc=" << fmt_double(rep.f_alloc)
     << " f_byte=" << fmt_double(rep.f_byte) << " norm_energy=" << fmt_double(rep.norm_energy)
     << " total=" << rep.total_generated_bytes << " gate=" << rep.bytes_via_gate
     << " macro=" << rep.bytes_via_macro << " gate_active_s=" << fmt_double(rep.gate_active_s)
     << " macro_busy_s=" << fmt_double(rep.macro_busy_s) << "\n";
  for (const auto& u : rep.users)
    os << u.ue_id << "," << u.alloc_slots << "," << u.bytes_offloaded << ","
       << fmt_double(u.stay_s) << "," << fmt_double(u.speed_mps) << "\n";
  return os.str();
}

}  // namespace

RunResult run(const ValidatedConfig& cfg, const RunOptions& opts) {
  return SimRun(cfg, opts).execute();
}

bool replay_check(const ValidatedConfig& cfg) {
  RunOptions opts;
  opts.record_events = true;
  RunResult a = run(cfg, opts);
  RunResult b = run(cfg, opts);
  return event_csv_string(a.events) == event_csv_string(b.events) &&
         report_to_string(a.report) == report_to_string(b.report) &&
         a.blockage_digest == b.blockage_digest;
}

void write_event_csv(std::span<const ProtocolEvent> events, std::ostream& os) {
  os << "time_s,kind,ue_id,file_id,detail\n";
  for (const auto& e : events)
    os << fmt_double(e.time_s) << "," << to_string(e.kind) << "," << e.ue_id << "," << e.file_id
       << "," << e.detail << "\n";
}

std::string event_csv_string(std::span<const ProtocolEvent> events) {
  std::ostringstream os;
  write_event_csv(events, os);
  return os.str();
}

void write_slot_trace_csv(std::span<const SlotTraceRow> trace, std::ostream& os) {
  os << "slot,time_s,ap,ue,sinr_linear,capacity_bps,rate_bps,utility\n";
  for (const auto& r : trace)
    os << r.slot << "," << fmt_double(r.time_s) << "," << r.ap_id << "," << r.ue_id << ","
       << fmt_double(r.sinr_linear) << "," << fmt_double(r.capacity_bps) << ","
       << fmt_double(r.rate_bps) << "," << fmt_double(r.utility) << "\n";
}

std::vector<RunResult> run_batch(std::span<const ValidatedConfig> cfgs, int jobs,
                                 const RunOptions& opts) {
  std::vector<RunResult> results(cfgs.size());
  if (cfgs.empty()) return results;
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(cfgs.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < cfgs.size(); ++i) results[i] = run(cfgs[i], opts);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  std::atomic<bool> failed{false};
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cfgs.size() || failed.load()) return;
        try {
          results[i] = run(cfgs[i], opts);
        } catch (...) {
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& th : workers) th.join();
  if (failed.load()) throw std::runtime_error("run_batch: a scenario run failed");
  return results;
}

}  // namespace gatesim
