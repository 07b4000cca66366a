// Acceptance suite. Runs every release criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion; the exit code is the number
// of failures. The AP x GRT grid is computed once and shared between the
// offloading-trend and energy criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "gatesim/channel.hpp"
#include "gatesim/config_io.hpp"
#include "gatesim/engine.hpp"
#include "gatesim/metrics.hpp"
#include "gatesim/mobility.hpp"
#include "gatesim/scheduler.hpp"
#include "gatesim/traffic.hpp"
#include "support.hpp"

using namespace gatesim;
using namespace gatesim::test;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  return num / std::sqrt(dx * dy);
}

// ---------------------------------------------------------------------------

void criterion_1_traffic_volume() {
  const auto start = std::chrono::steady_clock::now();
  TrafficParams params;  // Table defaults: 1.62 GB files / 600 s IAT / 1800 s window
  const int seeds = 500;
  double sum = 0.0;
  for (int s = 0; s < seeds; ++s) {
    RngStream rng(static_cast<std::uint64_t>(s) * 1000003 + 17);
    auto w = generate_workload(params, 14, rng);
    for (const auto& files : w)
      for (const auto& f : files) sum += static_cast<double>(f.total_bytes);
  }
  const double mean = sum / seeds;
  const double target = 68.04e9;
  const double rel = std::abs(mean - target) / target;
  const double secs = elapsed_s(start);
  report(1, rel <= 0.05 && secs < 60.0,
         "traffic volume: mean " + fmt(mean / 1e9) + " GB over " + std::to_string(seeds) +
             " seeds vs 68.04 GB (rel err " + fmt(rel) + ", " + fmt(secs) + " s)");
}

void criterion_2_deadline_model() {
  RngStream rng(20240915);
  const int n = 100000;
  int past_gate = 0;
  for (int i = 0; i < n; ++i) {
    const double fat = rng.uniform(0.0, 1800.0);
    if (draw_deadline(fat, 1800.0, 1.5, 0.1, rng) >= 1800.0) ++past_gate;
  }
  const double frac = static_cast<double>(past_gate) / n;
  report(2, frac >= 0.99,
         "deadline model: " + fmt(frac) + " of 1e5 draws reach past the gate (needs >= 0.99)");
}

struct GridPoint {
  int aps;
  double grt_h;
  double mean_gofe = 0.0;
  double mean_energy = 0.0;
  bool energy_below_one = true;
};

std::vector<GridPoint> run_fig4_grid(double& runtime_s) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<int> ap_counts{1, 2, 3, 4};
  const std::vector<double> grt_hours{0.5, 1.0, 1.5, 2.0};
  const int seeds = 20;

  std::vector<ValidatedConfig> cfgs;
  for (int aps : ap_counts)
    for (double h : grt_hours)
      for (int s = 0; s < seeds; ++s) {
        ScenarioConfig cfg;  // Table defaults: WPF, alpha 1, random walk
        cfg.num_aps = aps;
        cfg.grt_s = h * 3600.0;
        cfg.rng_seed = 1000 + static_cast<std::uint64_t>(s);
        cfgs.push_back(validate(std::move(cfg)));
      }

  RunOptions opts;
  opts.record_events = false;
  auto results = run_batch(cfgs, worker_count(), opts);

  std::vector<GridPoint> grid;
  std::size_t i = 0;
  for (int aps : ap_counts)
    for (double h : grt_hours) {
      GridPoint p{aps, h};
      for (int s = 0; s < seeds; ++s, ++i) {
        const auto& rep = results[i].report;
        p.mean_gofe += rep.gofe;
        p.mean_energy += rep.norm_energy;
        if (rep.gofe > 0.0 && !(rep.norm_energy < 1.0)) p.energy_below_one = false;
      }
      p.mean_gofe /= seeds;
      p.mean_energy /= seeds;
      grid.push_back(p);
    }
  runtime_s = elapsed_s(start);
  return grid;
}

void criterion_3_gofe_trends(const std::vector<GridPoint>& grid, double runtime_s) {
  auto mean_at = [&](int aps, double h) {
    for (const auto& p : grid)
      if (p.aps == aps && p.grt_h == h) return p.mean_gofe;
    return -1.0;
  };

  bool monotone_aps = true;
  for (double h : {0.5, 1.0, 1.5, 2.0})
    for (int aps = 1; aps < 4; ++aps)
      if (mean_at(aps + 1, h) < mean_at(aps, h) - 1e-9) monotone_aps = false;

  bool monotone_grt = true;
  const double hours[] = {0.5, 1.0, 1.5, 2.0};
  for (int aps = 1; aps <= 4; ++aps)
    for (int hi = 0; hi < 3; ++hi)
      if (mean_at(aps, hours[hi + 1]) > mean_at(aps, hours[hi]) + 1e-9) monotone_grt = false;

  const double best = mean_at(4, 0.5);
  const bool ok = monotone_aps && monotone_grt && best >= 0.95 && runtime_s < 1800.0;
  report(3, ok,
         "offloading trends: GOFE non-decreasing in APs (" + std::string(monotone_aps ? "yes" : "NO") +
             "), non-increasing in GRT (" + (monotone_grt ? "yes" : "NO") + "), mean at 4 APs/0.5 h = " +
             fmt(best) + " (needs >= 0.95), grid runtime " + fmt(runtime_s) + " s");
}

void criterion_4_energy(const std::vector<GridPoint>& grid) {
  bool all_below_one = true;
  std::vector<double> gofes, energies;
  double energy_best = 1.0;
  for (const auto& p : grid) {
    all_below_one = all_below_one && p.energy_below_one;
    gofes.push_back(p.mean_gofe);
    energies.push_back(p.mean_energy);
    if (p.aps == 4 && p.grt_h == 0.5) energy_best = p.mean_energy;
  }
  const double rho = spearman(gofes, energies);
  const bool ok = all_below_one && rho <= -0.9 && energy_best <= 0.10;
  report(4, ok,
         "normalized energy: below 1 whenever GOFE > 0 (" + std::string(all_below_one ? "yes" : "NO") +
             "), Spearman(GOFE, energy) = " + fmt(rho) + " (needs <= -0.9), mean at 4 APs/0.5 h = " +
             fmt(energy_best) + " (needs <= 0.10)");
}

void criterion_5_fairness_comparison() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> ratios{1.0, 2.0, 4.0, 8.0};
  const std::vector<SchedulerKind> schedulers{SchedulerKind::Wpf, SchedulerKind::Pf,
                                              SchedulerKind::Rr};
  const int seeds = 20;

  std::vector<ValidatedConfig> cfgs;
  for (auto sched : schedulers)
    for (double ratio : ratios)
      for (int s = 0; s < seeds; ++s) {
        ScenarioConfig cfg;
        cfg.scheduler = sched;
        cfg.num_aps = 3;
        cfg.grt_s = 3600.0;
        cfg.mobility.mode = MobilityMode::Directed;
        cfg.mobility.speed_ratio = ratio;
        cfg.rng_seed = 5000 + static_cast<std::uint64_t>(s);
        cfgs.push_back(validate(std::move(cfg)));
      }

  RunOptions opts;
  opts.record_events = false;
  auto results = run_batch(cfgs, worker_count(), opts);

  struct Means {
    double gofe = 0, fa = 0, fbo = 0;
  };
  std::map<std::pair<int, double>, Means> means;  // (scheduler index, ratio)
  std::size_t i = 0;
  for (std::size_t sc = 0; sc < schedulers.size(); ++sc)
    for (double ratio : ratios) {
      Means m;
      for (int s = 0; s < seeds; ++s, ++i) {
        m.gofe += results[i].report.gofe;
        m.fa += results[i].report.f_alloc;
        m.fbo += results[i].report.f_byte;
      }
      m.gofe /= seeds;
      m.fa /= seeds;
      m.fbo /= seeds;
      means[{static_cast<int>(sc), ratio}] = m;
    }

  bool wpf_dominates = true;
  std::string detail;
  for (double ratio : {2.0, 4.0, 8.0}) {
    const Means& wpf = means[{0, ratio}];
    for (int other : {1, 2}) {
      const Means& o = means[{other, ratio}];
      if (wpf.gofe < o.gofe || wpf.fa < o.fa || wpf.fbo < o.fbo) wpf_dominates = false;
    }
    detail += " r" + fmt(ratio) + ":wpf(" + fmt(wpf.gofe) + "," + fmt(wpf.fa) + "," +
              fmt(wpf.fbo) + ")";
  }
  const double g_wpf = means[{0, 1.0}].gofe;
  const double g_pf = means[{1, 1.0}].gofe;
  const double rel_gap = std::abs(g_wpf - g_pf) / (0.5 * (g_wpf + g_pf));
  const bool ok = wpf_dominates && rel_gap < 0.02;
  report(5, ok,
         "scheduler comparison: WPF >= PF,RR on GOFE/F_A/F_BO at ratios {2,4,8} (" +
             std::string(wpf_dominates ? "yes" : "NO") + "), equal-speed WPF/PF gap " +
             fmt(rel_gap * 100) + "% (needs < 2%)," + detail + ", " + fmt(elapsed_s(start)) + " s");
}

void criterion_6_selection_oracle() {
  RngStream rng(606060);
  const RadioParams radio = make_radio_params(ScenarioConfig{});
  int mismatches = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    const int a = 1 + static_cast<int>(rng.next_u64() % 3);
    const int k = 1 + static_cast<int>(rng.next_u64() % 6);

    OracleInstance oracle;
    std::vector<Vec3> aps;
    std::vector<UserEquipment> ues;
    std::vector<int> pool;
    BlockageState blockage;
    blockage.num_aps = a;
    blockage.num_ues = k;
    SchedulerInputs inputs;
    inputs.slot_s = 0.003;
    inputs.alpha = (trial % 4 == 0) ? 0.0 : rng.uniform(0.0, 1.0);

    for (int i = 0; i < a; ++i)
      aps.push_back(Vec3{rng.uniform(0.0, 20.0), rng.uniform(0.0, 10.0), 3.0});
    for (int i = 0; i < k; ++i) {
      UserEquipment ue;
      ue.id = i;
      ue.position = Vec2{rng.uniform(0.0, 20.0), rng.uniform(0.0, 10.0)};
      ue.in_gate = true;
      ues.push_back(ue);
      pool.push_back(i);
      UeSchedInput row;
      row.ue_id = i;
      row.remaining_bytes =
          (rng.next_u64() % 6 == 0) ? 0 : static_cast<std::int64_t>(rng.uniform(1e3, 5e9));
      row.avg_rate_bps = rng.uniform(1e3, 2e9);
      row.stay_s = rng.uniform(0.2, 15.0);
      row.eligible = row.remaining_bytes > 0;
      inputs.ues.push_back(row);
      inputs.ts_h_s = std::max(inputs.ts_h_s, row.stay_s);
      OracleUe ou;
      ou.position = ue.position;
      ou.remaining_bytes = row.remaining_bytes;
      ou.avg_rate_bps = row.avg_rate_bps;
      ou.stay_s = row.stay_s;
      oracle.ues.push_back(ou);
    }
    for (int i = 0; i < a * k; ++i)
      blockage.blocked.push_back(rng.bernoulli(0.25) ? 1 : 0);
    oracle.aps = aps;
    oracle.blocked = blockage.blocked;
    oracle.alpha = inputs.alpha;
    oracle.slot_s = inputs.slot_s;
    oracle.ts_h_s = inputs.ts_h_s;

    auto table = CapacityTable::build(aps, ues, pool, blockage, radio);
    Assignment got = select_multi(inputs, table, a);
    OracleBest want = oracle_best_assignment(oracle);

    std::vector<int> got_map(static_cast<std::size_t>(a), -1);
    for (const auto& l : got.links) got_map[static_cast<std::size_t>(l.ap_id)] = l.ue_id;
    if (got_map != want.ap_to_ue) ++mismatches;
  }
  report(6, mismatches == 0,
         "selection oracle: " + std::to_string(trials - mismatches) + "/" +
             std::to_string(trials) + " random instances match the brute-force enumerator");
}

void criterion_7_formula_suite() {
  bool ok = true;
  std::string fails;
  auto check = [&](bool c, const char* name) {
    if (!c) {
      ok = false;
      fails += std::string(" ") + name;
    }
  };

  check(std::abs(allocation_fairness(std::vector<std::int64_t>{1, 3}) - 0.8) <= 1e-12,
        "jain_alloc");
  check(std::abs(byte_fairness(std::vector<std::int64_t>{1, 2, 3}) - 6.0 / 7.0) <= 1e-12,
        "jain_bytes");
  check(std::abs(inst_rate_bps(5e9, 1'000'000, 0.003) - 8.0e6 / 0.003) <= 1e3, "inst_rate");
  check(std::abs(update_avg_rate(1e9, 1e9, true, 100) - 1e9) <= 1e-12 * 1e9, "ewma_fixed_point");
  check(std::abs(update_avg_rate(1e9, 2e9, true, 100) - 1.01e9) <= 1.0, "ewma_step");
  const RadioParams radio = make_radio_params(ScenarioConfig{});
  check(std::abs(capacity_bps(1.0, radio) - 1.512e9) <= 1e3, "capacity_sinr1");
  check(capacity_bps(0.0, radio) == 0.0, "capacity_zero");
  check(std::abs(capacity_bps(3.0, radio) - 3.024e9) <= 1e3, "capacity_sinr3");
  check(std::abs(path_loss_db(1.0, radio.ch) - 68.0) <= 0.1, "pl_1m");
  check(std::abs(path_loss_db(10.0, radio.ch) - 88.0) <= 0.1, "pl_10m");
  check(std::abs(priority_weight(7.2, 14.4) - 2.0) <= 1e-12, "weight");
  check(std::abs(utility(2e9, 1e9, 2.0, 1.0) - 4.0) <= 1e-12, "utility");
  check(utility(5e8, 1e9, 3.0, 0.0) == 0.5, "utility_alpha0");
  check(std::abs(gofe(64'600'000'000, 68'040'000'000) - 0.9494) <= 1e-4, "gofe");

  report(7, ok, ok ? "formula suite: all pinned values hold at stated tolerances"
                   : "formula suite: failed checks:" + fails);
}

void criterion_8_determinism(std::vector<RunResult>& keep_for_conservation) {
  ScenarioConfig cfg;
  cfg.num_aps = 2;
  cfg.grt_s = 900.0;
  cfg.rng_seed = 321;

  const ValidatedConfig v = validate(cfg);
  const bool replay_ok = replay_check(v);

  RunResult r1 = run(v);
  RunResult r2 = run(v);
  auto row_of = [&](const RunResult& r) {
    std::vector<RunRow> rows{make_run_row(*v, v->rng_seed, r.report)};
    auto aggs = summarize(rows);
    return results_csv_string(rows, aggs);
  };
  const bool csv_ok = row_of(r1) == row_of(r2);
  const bool events_ok = event_csv_string(r1.events) == event_csv_string(r2.events);

  ScenarioConfig pf_cfg = cfg;
  pf_cfg.scheduler = SchedulerKind::Pf;
  RunResult pf = run(validate(pf_cfg));
  ScenarioConfig rr_cfg = cfg;
  rr_cfg.scheduler = SchedulerKind::Rr;
  RunResult rr = run(validate(rr_cfg));
  const bool paired_ok = r1.workload == pf.workload && r1.workload == rr.workload &&
                         r1.blockage_digest == pf.blockage_digest &&
                         r1.blockage_digest == rr.blockage_digest;

  keep_for_conservation.push_back(std::move(r1));
  keep_for_conservation.push_back(std::move(pf));
  keep_for_conservation.push_back(std::move(rr));

  report(8, replay_ok && csv_ok && events_ok && paired_ok,
         std::string("determinism: replay byte-identical (") + (replay_ok && events_ok ? "yes" : "NO") +
             "), CSV byte-identical (" + (csv_ok ? "yes" : "NO") +
             "), scheduler swap keeps workload/blockage (" + (paired_ok ? "yes" : "NO") + ")");
}

void criterion_9_conservation(const std::vector<RunResult>& runs) {
  bool exact = true;
  bool fractions = true;
  for (const auto& r : runs) {
    std::int64_t total = 0, gate = 0, macro = 0, remaining = 0;
    for (const auto& files : r.final_files)
      for (const auto& f : files) {
        if (f.bytes_via_gate + f.bytes_via_macro + f.remaining_bytes != f.total_bytes)
          exact = false;
        total += f.total_bytes;
        gate += f.bytes_via_gate;
        macro += f.bytes_via_macro;
        remaining += f.remaining_bytes;
      }
    if (total > 0) {
      const double t = static_cast<double>(total);
      const double sum = static_cast<double>(gate) / t + static_cast<double>(macro) / t +
                         static_cast<double>(remaining) / t;
      if (std::abs(sum - 1.0) > 1e-9) fractions = false;
    }
  }
  report(9, exact && fractions,
         std::string("conservation: per-file byte identity exact (") + (exact ? "yes" : "NO") +
             "), GOFE + macro + undelivered = 1 within 1e-9 (" + (fractions ? "yes" : "NO") +
             ") over " + std::to_string(runs.size()) + " runs");
}

}  // namespace

int main() {
  std::printf("acceptance suite (%d worker threads)\n", worker_count());

  criterion_1_traffic_volume();
  criterion_2_deadline_model();

  double grid_runtime = 0.0;
  auto grid = run_fig4_grid(grid_runtime);
  criterion_3_gofe_trends(grid, grid_runtime);
  criterion_4_energy(grid);

  criterion_5_fairness_comparison();
  criterion_6_selection_oracle();
  criterion_7_formula_suite();

  std::vector<RunResult> conservation_runs;
  criterion_8_determinism(conservation_runs);
  criterion_9_conservation(conservation_runs);

  std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT",
              g_failures, g_failures == 1 ? "" : "s");
  return g_failures;
}
