#include "gatesim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "gatesim/util.hpp"

namespace gatesim {

namespace {

double jain_index(std::span<const std::int64_t> x, const char* what) {
  if (x.empty()) throw std::domain_error(std::string(what) + ": empty vector");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (auto v : x) {
    const double d = static_cast<double>(v);
    sum += d;
    sum_sq += d * d;
  }
  if (sum_sq == 0.0) throw std::domain_error(std::string(what) + ": all entries zero");
  return (sum * sum) / (static_cast<double>(x.size()) * sum_sq);
}

}  // namespace

double allocation_fairness(std::span<const std::int64_t> alloc_slots) {
  return jain_index(alloc_slots, "allocation_fairness");
}

double byte_fairness(std::span<const std::int64_t> bytes_offloaded) {
  return jain_index(bytes_offloaded, "byte_fairness");
}

double gofe(std::int64_t bytes_via_gate, std::int64_t total_generated_bytes) {
  if (total_generated_bytes <= 0) throw std::domain_error("gofe: no generated bytes");
  return static_cast<double>(bytes_via_gate) / static_cast<double>(total_generated_bytes);
}

double normalized_energy(const MetricsReport& report, const EnergyConfig& energy,
                         const ScenarioConfig& cfg) {
  if (report.total_generated_bytes <= 0)
    throw std::domain_error("normalized_energy: no generated bytes");
  const double numerator = energy.ue_power_mmw_w * report.gate_active_s +
                           energy.ue_power_macro_w * report.macro_busy_s;
  const double all_macro_s =
      static_cast<double>(report.total_generated_bytes) * 8.0 / cfg.macro_rate_bps;
  return numerator / (energy.ue_power_macro_w * all_macro_s);
}

namespace {

MetricStats stats_of(std::vector<double> values) {
  // Sorting first makes the accumulation order-independent.
  std::sort(values.begin(), values.end());
  MetricStats s;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

}  // namespace

std::vector<AggregateRow> summarize(std::span<const RunRow> rows) {
  using Key = std::tuple<std::string, int, double, double>;
  std::map<Key, std::vector<const RunRow*>> groups;
  for (const auto& r : rows)
    groups[Key{r.scheduler, r.num_aps, r.grt_s, r.speed_ratio}].push_back(&r);

  std::vector<AggregateRow> out;
  out.reserve(groups.size());
  for (const auto& [key, members] : groups) {
    AggregateRow a;
    a.scheduler = std::get<0>(key);
    a.num_aps = std::get<1>(key);
    a.grt_s = std::get<2>(key);
    a.speed_ratio = std::get<3>(key);
    a.count = static_cast<int>(members.size());
    std::vector<double> v;
    v.reserve(members.size());
    auto pull = [&](double RunRow::*field) {
      v.clear();
      for (const RunRow* m : members) v.push_back(m->*field);
      return stats_of(v);
    };
    a.gofe = pull(&RunRow::gofe);
    a.f_alloc = pull(&RunRow::f_alloc);
    a.f_byte = pull(&RunRow::f_byte);
    a.norm_energy = pull(&RunRow::norm_energy);
    out.push_back(std::move(a));
  }
  return out;
}

RunRow make_run_row(const ScenarioConfig& cfg, std::uint64_t seed, const MetricsReport& report) {
  RunRow r;
  r.scheduler = to_string(cfg.scheduler);
  r.num_aps = cfg.num_aps;
  r.grt_s = cfg.grt_s;
  r.speed_ratio = cfg.mobility.speed_ratio;
  r.seed = seed;
  r.gofe = report.gofe;
  r.f_alloc = report.f_alloc;
  r.f_byte = report.f_byte;
  r.norm_energy = report.norm_energy;
  r.total_bytes = report.total_generated_bytes;
  r.gate_bytes = report.bytes_via_gate;
  r.macro_bytes = report.bytes_via_macro;
  return r;
}

namespace {
const char* kResultsHeader =
    "scheduler,num_aps,grt_s,speed_ratio,seed,gofe,f_alloc,f_byte,norm_energy,"
    "total_bytes,gate_bytes,macro_bytes\n";
}

void write_results_csv(std::span<const RunRow> rows, std::span<const AggregateRow> aggregates,
                       std::ostream& os) {
  os << kResultsHeader;
  for (const auto& r : rows) {
    os << r.scheduler << "," << r.num_aps << "," << fmt_double_g9(r.grt_s) << ","
       << fmt_double_g9(r.speed_ratio) << "," << r.seed << "," << fmt_double_g9(r.gofe) << ","
       << fmt_double_g9(r.f_alloc) << "," << fmt_double_g9(r.f_byte) << ","
       << fmt_double_g9(r.norm_energy) << "," << r.total_bytes << "," << r.gate_bytes << ","
       << r.macro_bytes << "\n";
  }
  for (const auto& a : aggregates) {
    os << a.scheduler << "," << a.num_aps << "," << fmt_double_g9(a.grt_s) << ","
       << fmt_double_g9(a.speed_ratio) << ",mean," << fmt_double_g9(a.gofe.mean) << ","
       << fmt_double_g9(a.f_alloc.mean) << "," << fmt_double_g9(a.f_byte.mean) << ","
       << fmt_double_g9(a.norm_energy.mean) << ",,,\n";
  }
}

std::string results_csv_string(std::span<const RunRow> rows,
                               std::span<const AggregateRow> aggregates) {
  std::ostringstream os;
  write_results_csv(rows, aggregates, os);
  return os.str();
}

void write_summary_csv(std::span<const AggregateRow> aggregates, std::ostream& os) {
  os << "scheduler,num_aps,grt_s,speed_ratio,count,gofe_mean,gofe_std,f_alloc_mean,f_alloc_std,"
        "f_byte_mean,f_byte_std,norm_energy_mean,norm_energy_std\n";
  for (const auto& a : aggregates) {
    os << a.scheduler << "," << a.num_aps << "," << fmt_double_g9(a.grt_s) << ","
       << fmt_double_g9(a.speed_ratio) << "," << a.count << "," << fmt_double_g9(a.gofe.mean) << ","
       << fmt_double_g9(a.gofe.stddev) << "," << fmt_double_g9(a.f_alloc.mean) << ","
       << fmt_double_g9(a.f_alloc.stddev) << "," << fmt_double_g9(a.f_byte.mean) << ","
       << fmt_double_g9(a.f_byte.stddev) << "," << fmt_double_g9(a.norm_energy.mean) << ","
       << fmt_double_g9(a.norm_energy.stddev) << "\n";
  }
}

}  // namespace gatesim
