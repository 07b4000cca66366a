// gatesim: batch experiment driver.
//
//   gatesim run      --config FILE [--seed N] [--out DIR] [--events]
//                    [--trace] [--dump-workload]
//   gatesim sweep    --config FILE [--aps 1,2,3,4] [--grt 0.5,1,1.5,2]
//                    [--seeds N] [--jobs J] [--out DIR]
//   gatesim fairness --config FILE [--schedulers wpf,pf,rr]
//                    [--speed-ratios 1,2,4,8] [--aps 3] [--grt 1]
//                    [--seeds N] [--jobs J] [--out DIR]
//   gatesim validate --config FILE
//
// --grt takes hours on the sweep/fairness grids. Seeds are the config's
// rng_seed + 0..N-1, recorded in the manifest. All CSVs are written to a
// temp file and renamed into place, so a crash never leaves partial output.
// Exit codes: 0 success, 1 config/usage error, 2 I/O failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gatesim/config_io.hpp"
#include "gatesim/engine.hpp"
#include "gatesim/metrics.hpp"
#include "gatesim/model.hpp"
#include "gatesim/traffic.hpp"
#include "gatesim/util.hpp"

namespace fs = std::filesystem;
using namespace gatesim;

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + tmp.string());
    os << content;
    if (!os) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed: " + path.string() + " (" + ec.message() + ")");
}

fs::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return fs::path(flag_value);
  if (const char* env = std::getenv("GATESIM_OUT"); env && *env) return fs::path(env);
  return fs::path("out");
}

std::vector<double> parse_double_list(const std::string& csv, const char* what) {
  std::vector<double> out;
  for (auto item : split(csv, ',')) {
    auto v = parse_double(trim(item));
    if (!v) throw ConfigParseError(std::string(what) + ": not a number: '" + std::string(trim(item)) + "'");
    out.push_back(*v);
  }
  if (out.empty()) throw ConfigParseError(std::string(what) + ": empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
  std::vector<int> out;
  for (double v : parse_double_list(csv, what)) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<SchedulerKind> parse_scheduler_list(const std::string& csv) {
  std::vector<SchedulerKind> out;
  for (auto item : split(csv, ',')) {
    std::string s = to_lower(trim(item));
    if (s == "wpf") out.push_back(SchedulerKind::Wpf);
    else if (s == "pf") out.push_back(SchedulerKind::Pf);
    else if (s == "rr") out.push_back(SchedulerKind::Rr);
    else throw ConfigParseError("--schedulers: expected wpf|pf|rr, got '" + s + "'");
  }
  if (out.empty()) throw ConfigParseError("--schedulers: empty list");
  return out;
}

std::string manifest_text(const ScenarioConfig& base, const std::string& command,
                          const std::vector<std::uint64_t>& seeds,
                          const std::string& grid_desc) {
  std::ostringstream os;
  os << "# gatesim run manifest\n";
  os << "command = " << command << "\n";
  os << "grid = " << grid_desc << "\n";
  os << "seeds =";
  for (auto s : seeds) os << " " << s;
  os << "\n\n# resolved base configuration\n" << serialize_scenario(base);
  return os.str();
}

std::vector<std::uint64_t> seed_list(std::uint64_t master, int n) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < n; ++i) seeds.push_back(master + static_cast<std::uint64_t>(i));
  return seeds;
}

struct GridResult {
  std::vector<RunRow> rows;
  std::vector<AggregateRow> aggregates;
};

GridResult run_grid(const std::vector<ScenarioConfig>& points, int jobs) {
  std::vector<ValidatedConfig> validated;
  validated.reserve(points.size());
  for (const auto& p : points) validated.push_back(validate(p));

  RunOptions opts;
  opts.record_events = false;
  auto results = run_batch(validated, jobs, opts);

  GridResult grid;
  grid.rows.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i)
    grid.rows.push_back(make_run_row(*validated[i], points[i].rng_seed, results[i].report));
  grid.aggregates = summarize(grid.rows);
  return grid;
}

void write_grid_outputs(const fs::path& out_dir, const GridResult& grid,
                        const std::string& manifest) {
  write_file_atomic(out_dir / "results.csv", results_csv_string(grid.rows, grid.aggregates));
  std::ostringstream sum;
  write_summary_csv(grid.aggregates, sum);
  write_file_atomic(out_dir / "summary.csv", sum.str());
  write_file_atomic(out_dir / "manifest.txt", manifest);
}

int cmd_run(const std::string& config_path, std::uint64_t seed, bool seed_set,
            const std::string& out_flag, bool dump_events, bool dump_trace, bool dump_workload) {
  ScenarioConfig cfg = load_scenario_file(config_path);
  if (seed_set) cfg.rng_seed = seed;
  ValidatedConfig v = validate(cfg);

  RunOptions opts;
  opts.record_events = dump_events;
  opts.record_slot_trace = dump_trace;
  RunResult result = run(v, opts);

  std::vector<RunRow> rows{make_run_row(*v, v->rng_seed, result.report)};
  auto aggregates = summarize(rows);

  const fs::path out_dir = resolve_out_dir(out_flag);
  write_grid_outputs(out_dir, GridResult{rows, aggregates},
                     manifest_text(*v, "run", {v->rng_seed}, "single run"));
  if (dump_events) {
    std::ostringstream os;
    write_event_csv(result.events, os);
    write_file_atomic(out_dir / "events.csv", os.str());
  }
  if (dump_trace) {
    std::ostringstream os;
    write_slot_trace_csv(result.report.slot_trace, os);
    write_file_atomic(out_dir / "slot_trace.csv", os.str());
  }
  if (dump_workload) {
    std::ostringstream os;
    write_workload_csv(result.workload, os);
    write_file_atomic(out_dir / "workload.csv", os.str());
  }

  std::cout << "gofe=" << fmt_double_g9(result.report.gofe)
            << " f_alloc=" << fmt_double_g9(result.report.f_alloc)
            << " f_byte=" << fmt_double_g9(result.report.f_byte)
            << " norm_energy=" << fmt_double_g9(result.report.norm_energy) << "\n";
  std::cout << "results written to " << out_dir.string() << "\n";
  return 0;
}

// Resolved config for the manifest; an empty AP list stays empty so that
// re-running any grid point re-derives the per-AP-count auto layout.
ScenarioConfig manifest_config(const ScenarioConfig& base) {
  ScenarioConfig resolved = validate(base).get();
  if (base.gate.ap_positions.empty()) resolved.gate.ap_positions.clear();
  return resolved;
}

int cmd_sweep(const std::string& config_path, const std::string& aps_csv,
              const std::string& grt_csv, int num_seeds, int jobs, const std::string& out_flag) {
  ScenarioConfig base = load_scenario_file(config_path);
  validate(base);  // fail early with field-level messages

  auto aps = parse_int_list(aps_csv, "--aps");
  auto grt_hours = parse_double_list(grt_csv, "--grt");
  auto seeds = seed_list(base.rng_seed, num_seeds);

  std::vector<ScenarioConfig> points;
  for (int ap : aps)
    for (double grt_h : grt_hours)
      for (auto seed : seeds) {
        ScenarioConfig p = base;  // explicit ap_positions, if any, stay in force
        p.num_aps = ap;
        p.grt_s = grt_h * 3600.0;
        p.rng_seed = seed;
        points.push_back(std::move(p));
      }

  GridResult grid = run_grid(points, jobs);
  std::ostringstream desc;
  desc << "aps={" << aps_csv << "} grt_hours={" << grt_csv << "} seeds=" << num_seeds;
  write_grid_outputs(resolve_out_dir(out_flag), grid,
                     manifest_text(manifest_config(base), "sweep", seeds, desc.str()));
  std::cout << grid.rows.size() << " rows + " << grid.aggregates.size()
            << " aggregate rows written to " << resolve_out_dir(out_flag).string() << "\n";
  return 0;
}

int cmd_fairness(const std::string& config_path, const std::string& sched_csv,
                 const std::string& ratio_csv, int num_aps, double grt_hours, int num_seeds,
                 int jobs, const std::string& out_flag) {
  ScenarioConfig base = load_scenario_file(config_path);
  validate(base);

  auto schedulers = parse_scheduler_list(sched_csv);
  auto ratios = parse_double_list(ratio_csv, "--speed-ratios");
  auto seeds = seed_list(base.rng_seed, num_seeds);

  std::vector<ScenarioConfig> points;
  for (auto sched : schedulers)
    for (double ratio : ratios)
      for (auto seed : seeds) {
        ScenarioConfig p = base;
        p.scheduler = sched;
        p.mobility.speed_ratio = ratio;
        p.num_aps = num_aps;
        p.grt_s = grt_hours * 3600.0;
        p.rng_seed = seed;
        points.push_back(std::move(p));
      }

  GridResult grid = run_grid(points, jobs);
  std::ostringstream desc;
  desc << "schedulers={" << sched_csv << "} speed_ratios={" << ratio_csv << "} aps=" << num_aps
       << " grt_hours=" << fmt_double(grt_hours) << " seeds=" << num_seeds;
  write_grid_outputs(resolve_out_dir(out_flag), grid,
                     manifest_text(manifest_config(base), "fairness", seeds, desc.str()));
  std::cout << grid.rows.size() << " rows + " << grid.aggregates.size()
            << " aggregate rows written to " << resolve_out_dir(out_flag).string() << "\n";
  return 0;
}

int cmd_validate(const std::string& config_path) {
  ScenarioConfig cfg = load_scenario_file(config_path);
  validate(cfg);
  std::cout << "OK: " << config_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delayed mobile-data offloading simulator: mmWave gate scheduling experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_flag;
  std::uint64_t seed = 0;
  bool dump_events = false;
  bool dump_trace = false;
  bool dump_workload = false;

  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("--config", config_path, "Scenario file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the config rng_seed");
  run_cmd->add_option("--out", out_flag, "Output directory (default $GATESIM_OUT or ./out)");
  run_cmd->add_flag("--events", dump_events, "Write the protocol event log CSV");
  run_cmd->add_flag("--trace", dump_trace, "Write the per-slot scheduling trace CSV");
  run_cmd->add_flag("--dump-workload", dump_workload, "Write the generated workload CSV");

  std::string aps_csv = "1,2,3,4";
  std::string grt_csv = "0.5,1,1.5,2";
  int num_seeds = 20;
  int jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "AP-count x GRT grid");
  sweep_cmd->add_option("--config", config_path, "Scenario file")->required();
  sweep_cmd->add_option("--aps", aps_csv, "AP counts, comma separated");
  sweep_cmd->add_option("--grt", grt_csv, "GRT values in hours, comma separated");
  sweep_cmd->add_option("--seeds", num_seeds, "Seeds per grid point");
  sweep_cmd->add_option("--jobs", jobs, "Parallel runs");
  sweep_cmd->add_option("--out", out_flag, "Output directory");

  std::string sched_csv = "wpf,pf,rr";
  std::string ratio_csv = "1,2,4,8";
  int fairness_aps = 3;
  double fairness_grt_h = 1.0;
  auto* fair_cmd = app.add_subcommand("fairness", "Scheduler x speed-ratio grid");
  fair_cmd->add_option("--config", config_path, "Scenario file")->required();
  fair_cmd->add_option("--schedulers", sched_csv, "Schedulers, comma separated");
  fair_cmd->add_option("--speed-ratios", ratio_csv, "Fastest/slowest speed ratios");
  fair_cmd->add_option("--aps", fairness_aps, "AP count");
  fair_cmd->add_option("--grt", fairness_grt_h, "GRT in hours");
  fair_cmd->add_option("--seeds", num_seeds, "Seeds per grid point");
  fair_cmd->add_option("--jobs", jobs, "Parallel runs");
  fair_cmd->add_option("--out", out_flag, "Output directory");

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("--config", config_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed())
      return cmd_run(config_path, seed, seed_opt->count() > 0, out_flag, dump_events, dump_trace,
                     dump_workload);
    if (sweep_cmd->parsed())
      return cmd_sweep(config_path, aps_csv, grt_csv, num_seeds, jobs, out_flag);
    if (fair_cmd->parsed())
      return cmd_fairness(config_path, sched_csv, ratio_csv, fairness_aps, fairness_grt_h,
                          num_seeds, jobs, out_flag);
    if (validate_cmd->parsed()) return cmd_validate(config_path);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidConfig& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ConfigParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
