#include "gatesim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "gatesim/util.hpp"

namespace gatesim {

TrafficParams traffic_params_from(const ScenarioConfig& cfg) {
  return TrafficParams{cfg.mean_file_bytes, cfg.mean_iat_s, cfg.grt_s, cfg.rho, cfg.delta_frac};
}

double draw_deadline(double fat_s, double grt_s, double rho, double delta_frac, RngStream& rng) {
  if (!(fat_s >= 0.0) || fat_s > grt_s)
    throw std::invalid_argument("draw_deadline: fat_s must be within [0, grt_s]");
  const double horizon = grt_s - fat_s;
  const double x = rng.normal(rho * horizon, delta_frac * horizon);
  return fat_s + std::max(x, 0.0);
}

std::vector<std::vector<DelayedFile>> generate_workload(const TrafficParams& params, int ue_count,
                                                        RngStream& rng) {
  std::vector<std::vector<DelayedFile>> workload(static_cast<std::size_t>(ue_count));
  int next_id = 0;
  for (int ue = 0; ue < ue_count; ++ue) {
    auto& files = workload[static_cast<std::size_t>(ue)];
    double t = rng.exponential(params.mean_iat_s);
    while (t < params.window_s) {
      DelayedFile f;
      f.id = next_id++;
      f.owner_ue = ue;
      f.total_bytes = std::max<std::int64_t>(1, std::llround(rng.exponential(params.mean_file_bytes)));
      f.remaining_bytes = f.total_bytes;
      f.fat_s = t;
      f.deadline_s = draw_deadline(t, params.window_s, params.rho, params.delta_frac, rng);
      files.push_back(f);
      t += rng.exponential(params.mean_iat_s);
    }
  }
  return workload;
}

namespace {

// True when a beats b under the configured order at time now_s.
bool srtf_before(const DelayedFile& a, const DelayedFile& b, SrtfOrder order) {
  if (order == SrtfOrder::Deadline) {
    if (a.deadline_s != b.deadline_s) return a.deadline_s < b.deadline_s;
    if (a.remaining_bytes != b.remaining_bytes) return a.remaining_bytes < b.remaining_bytes;
    return a.id < b.id;
  }
  if (a.remaining_bytes != b.remaining_bytes) return a.remaining_bytes < b.remaining_bytes;
  if (a.deadline_s != b.deadline_s) return a.deadline_s < b.deadline_s;
  return a.id < b.id;
}

}  // namespace

const DelayedFile* next_file(std::span<const DelayedFile> table, double now_s, SrtfOrder order) {
  const DelayedFile* best = nullptr;
  for (const auto& f : table) {
    if (f.remaining_bytes <= 0 || f.fat_s > now_s) continue;
    if (!best || srtf_before(f, *best, order)) best = &f;
  }
  return best;
}

DelayedFile* next_file_mut(std::span<DelayedFile> table, double now_s, SrtfOrder order) {
  std::span<const DelayedFile> view(table.data(), table.size());
  const DelayedFile* best = next_file(view, now_s, order);
  return best ? table.data() + (best - view.data()) : nullptr;
}

std::int64_t total_remaining(std::span<const DelayedFile> table, double now_s) {
  std::int64_t sum = 0;
  for (const auto& f : table)
    if (f.fat_s <= now_s) sum += f.remaining_bytes;
  return sum;
}

void write_workload_csv(std::span<const std::vector<DelayedFile>> workload, std::ostream& os) {
  os << "ue_id,file_id,fat_s,total_bytes,deadline_s\n";
  for (const auto& files : workload)
    for (const auto& f : files)
      os << f.owner_ue << "," << f.id << "," << fmt_double(f.fat_s) << "," << f.total_bytes << ","
         << fmt_double(f.deadline_s) << "\n";
}

std::vector<std::vector<DelayedFile>> read_workload_csv(std::istream& is, int ue_count) {
  std::vector<std::vector<DelayedFile>> workload(static_cast<std::size_t>(std::max(ue_count, 0)));
  std::string line;
  bool header = true;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto l = trim(line);
    if (l.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto parts = split(l, ',');
    if (parts.size() != 5)
      throw std::runtime_error("workload csv line " + std::to_string(line_no) + ": expected 5 fields");
    auto ue = parse_int64(trim(parts[0]));
    auto id = parse_int64(trim(parts[1]));
    auto fat = parse_double(trim(parts[2]));
    auto total = parse_int64(trim(parts[3]));
    auto deadline = parse_double(trim(parts[4]));
    if (!ue || !id || !fat || !total || !deadline)
      throw std::runtime_error("workload csv line " + std::to_string(line_no) + ": bad field");
    DelayedFile f;
    f.id = static_cast<int>(*id);
    f.owner_ue = static_cast<int>(*ue);
    f.total_bytes = *total;
    f.remaining_bytes = *total;
    f.fat_s = *fat;
    f.deadline_s = *deadline;
    if (*ue < 0) throw std::runtime_error("workload csv: negative ue_id");
    if (workload.size() <= static_cast<std::size_t>(*ue))
      workload.resize(static_cast<std::size_t>(*ue) + 1);
    workload[static_cast<std::size_t>(*ue)].push_back(f);
  }
  for (auto& files : workload)
    std::sort(files.begin(), files.end(),
              [](const DelayedFile& a, const DelayedFile& b) { return a.fat_s < b.fat_s; });
  return workload;
}

}  // namespace gatesim
