// Headline quantities: Jain fairness over slot allocations and offloaded
// bytes, gate offloading efficiency, and UE energy normalized to the
// macro-only counterfactual. Plus per-seed result rows, aggregation, and
// the results CSV format.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gatesim/model.hpp"

namespace gatesim {

// Jain index (sum x)^2 / (K sum x^2) over per-user slot counts.
// Throws std::domain_error when the vector is empty or all zero.
double allocation_fairness(std::span<const std::int64_t> alloc_slots);

// Same form over per-user offloaded bytes.
double byte_fairness(std::span<const std::int64_t> bytes_offloaded);

// Fraction of all generated bytes moved through the gate.
// Throws std::domain_error when total_bytes is 0.
double gofe(std::int64_t bytes_via_gate, std::int64_t total_generated_bytes);

// (P_mmw * gate-active seconds + P_macro * macro seconds) divided by the
// all-macro counterfactual P_macro * total_bytes * 8 / macro_rate.
double normalized_energy(const MetricsReport& report, const EnergyConfig& energy,
                         const ScenarioConfig& cfg);

struct RunRow {
  std::string scheduler;
  int num_aps = 0;
  double grt_s = 0.0;
  double speed_ratio = 1.0;
  std::uint64_t seed = 0;
  double gofe = 0.0;
  double f_alloc = 0.0;
  double f_byte = 0.0;
  double norm_energy = 0.0;
  std::int64_t total_bytes = 0;
  std::int64_t gate_bytes = 0;
  std::int64_t macro_bytes = 0;
};

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample, n-1
};

struct AggregateRow {
  std::string scheduler;
  int num_aps = 0;
  double grt_s = 0.0;
  double speed_ratio = 1.0;
  int count = 0;
  MetricStats gofe;
  MetricStats f_alloc;
  MetricStats f_byte;
  MetricStats norm_energy;
};

// Groups rows by (scheduler, num_aps, grt_s, speed_ratio); mean/std/count
// per metric. Values are sorted before accumulating, so the output is
// identical under any input permutation.
std::vector<AggregateRow> summarize(std::span<const RunRow> rows);

RunRow make_run_row(const ScenarioConfig& cfg, std::uint64_t seed, const MetricsReport& report);

// Fixed-order results CSV: per-seed rows then one aggregate (mean) row per
// sweep point with "mean" in the seed column.
void write_results_csv(std::span<const RunRow> rows, std::span<const AggregateRow> aggregates,
                       std::ostream& os);
std::string results_csv_string(std::span<const RunRow> rows,
                               std::span<const AggregateRow> aggregates);

// Companion file with mean/std/count per metric per sweep point.
void write_summary_csv(std::span<const AggregateRow> aggregates, std::ostream& os);

}  // namespace gatesim
