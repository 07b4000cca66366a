#include "gatesim/config_io.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gatesim/util.hpp"

namespace gatesim {

namespace {

[[noreturn]] void fail(int line_no, const std::string& msg) {
  throw ConfigParseError("line " + std::to_string(line_no) + ": " + msg);
}

double want_double(int line_no, std::string_view key, std::string_view value) {
  auto v = parse_double(value);
  if (!v) fail(line_no, std::string(key) + ": not a number: '" + std::string(value) + "'");
  return *v;
}

int want_int(int line_no, std::string_view key, std::string_view value) {
  auto v = parse_int64(value);
  if (!v) fail(line_no, std::string(key) + ": not an integer: '" + std::string(value) + "'");
  return static_cast<int>(*v);
}

std::uint64_t want_u64(int line_no, std::string_view key, std::string_view value) {
  auto v = parse_uint64(value);
  if (!v) fail(line_no, std::string(key) + ": not an unsigned integer: '" + std::string(value) + "'");
  return *v;
}

Vec2 want_point(int line_no, std::string_view key, std::string_view value) {
  auto parts = split(value, ',');
  if (parts.size() != 2) fail(line_no, std::string(key) + ": expected 'x, y'");
  return Vec2{want_double(line_no, key, trim(parts[0])), want_double(line_no, key, trim(parts[1]))};
}

std::vector<Vec3> want_points3(int line_no, std::string_view key, std::string_view value) {
  std::vector<Vec3> out;
  for (auto item : split(value, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    std::vector<std::string_view> nums;
    for (auto t : split(item, ' '))
      if (!trim(t).empty()) nums.push_back(trim(t));
    if (nums.size() != 3) fail(line_no, std::string(key) + ": expected 'x y z' triples");
    out.push_back(Vec3{want_double(line_no, key, nums[0]), want_double(line_no, key, nums[1]),
                       want_double(line_no, key, nums[2])});
  }
  return out;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig cfg;
  // Entrance/exit defaults track the box dimensions unless set explicitly.
  bool entrance_set = false;
  bool exit_set = false;

  using Setter = std::function<void(int, std::string_view)>;
  std::map<std::string, std::map<std::string, Setter>> schema;

  auto d = [](double& field) {
    return [&field](int ln, std::string_view v) { field = want_double(ln, "value", v); };
  };
  auto i = [](int& field) {
    return [&field](int ln, std::string_view v) { field = want_int(ln, "value", v); };
  };

  auto& sc = schema["scenario"];
  sc["num_aps"] = i(cfg.num_aps);
  sc["num_ues"] = i(cfg.num_ues);
  sc["grt_s"] = d(cfg.grt_s);
  sc["slot_s"] = d(cfg.slot_s);
  sc["mean_file_bytes"] = d(cfg.mean_file_bytes);
  sc["mean_iat_s"] = d(cfg.mean_iat_s);
  sc["rho"] = d(cfg.rho);
  sc["delta_frac"] = d(cfg.delta_frac);
  sc["macro_rate_bps"] = d(cfg.macro_rate_bps);
  sc["macro_tx_dbm"] = d(cfg.macro_tx_dbm);
  sc["ap_tx_dbm"] = d(cfg.ap_tx_dbm);
  sc["ap_bandwidth_hz"] = d(cfg.ap_bandwidth_hz);
  sc["bw_eff"] = d(cfg.bw_eff);
  sc["snr_eff"] = d(cfg.snr_eff);
  sc["alpha"] = d(cfg.alpha);
  sc["n_c"] = i(cfg.n_c);
  sc["r_init_bps"] = d(cfg.r_init_bps);
  sc["scheduler"] = [&cfg](int ln, std::string_view v) {
    std::string s = to_lower(v);
    if (s == "wpf") cfg.scheduler = SchedulerKind::Wpf;
    else if (s == "pf") cfg.scheduler = SchedulerKind::Pf;
    else if (s == "rr") cfg.scheduler = SchedulerKind::Rr;
    else fail(ln, "scheduler: expected wpf | pf | rr");
  };
  sc["srtf_order"] = [&cfg](int ln, std::string_view v) {
    std::string s = to_lower(v);
    if (s == "deadline") cfg.srtf_order = SrtfOrder::Deadline;
    else if (s == "size") cfg.srtf_order = SrtfOrder::Size;
    else fail(ln, "srtf_order: expected deadline | size");
  };
  sc["ts_h_mode"] = [&cfg](int ln, std::string_view v) {
    std::string s = to_lower(v);
    if (s == "dynamic") cfg.ts_h_mode = TsHorizonMode::Dynamic;
    else if (s == "static") cfg.ts_h_mode = TsHorizonMode::Static;
    else fail(ln, "ts_h_mode: expected dynamic | static");
  };
  sc["rng_seed"] = [&cfg](int ln, std::string_view v) { cfg.rng_seed = want_u64(ln, "rng_seed", v); };

  auto& gt = schema["gate"];
  gt["width_m"] = d(cfg.gate.width_m);
  gt["depth_m"] = d(cfg.gate.depth_m);
  gt["ap_height_m"] = d(cfg.gate.ap_height_m);
  gt["entrance"] = [&](int ln, std::string_view v) {
    cfg.gate.entrance = want_point(ln, "entrance", v);
    entrance_set = true;
  };
  gt["exit"] = [&](int ln, std::string_view v) {
    cfg.gate.exit = want_point(ln, "exit", v);
    exit_set = true;
  };
  gt["ap_positions"] = [&cfg](int ln, std::string_view v) {
    cfg.gate.ap_positions = want_points3(ln, "ap_positions", v);
  };

  auto& mb = schema["mobility"];
  mb["mode"] = [&cfg](int ln, std::string_view v) {
    std::string s = to_lower(v);
    if (s == "random_walk") cfg.mobility.mode = MobilityMode::RandomWalk;
    else if (s == "directed") cfg.mobility.mode = MobilityMode::Directed;
    else fail(ln, "mode: expected random_walk | directed");
  };
  mb["mean_speed_mps"] = d(cfg.mobility.mean_speed_mps);
  mb["speed_ratio"] = d(cfg.mobility.speed_ratio);
  mb["heading_jitter_rad"] = d(cfg.mobility.heading_jitter_rad);

  auto& ch = schema["channel"];
  ch["carrier_hz"] = d(cfg.channel.carrier_hz);
  ch["main_lobe_gain_db"] = d(cfg.channel.main_lobe_gain_db);
  ch["side_lobe_gain_db"] = d(cfg.channel.side_lobe_gain_db);
  ch["noise_figure_db"] = d(cfg.channel.noise_figure_db);
  ch["blockage_prob_max"] = d(cfg.channel.blockage_prob_max);
  ch["blockage_loss_db"] = d(cfg.channel.blockage_loss_db);
  ch["pathloss_exponent"] = d(cfg.channel.pathloss_exponent);

  auto& en = schema["energy"];
  en["ue_power_mmw_w"] = d(cfg.energy.ue_power_mmw_w);
  en["ue_power_macro_w"] = d(cfg.energy.ue_power_macro_w);

  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = to_lower(trim(line.substr(1, line.size() - 2)));
      if (!schema.count(section)) fail(line_no, "unknown section [" + section + "]");
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    std::string key = to_lower(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) fail(line_no, "key '" + key + "' outside any section");
    auto& keys = schema[section];
    auto it = keys.find(key);
    if (it == keys.end()) fail(line_no, "unknown key '" + key + "' in section [" + section + "]");
    it->second(line_no, value);
  }

  if (!entrance_set) cfg.gate.entrance = Vec2{0.0, cfg.gate.depth_m / 2.0};
  if (!exit_set) cfg.gate.exit = Vec2{cfg.gate.width_m, cfg.gate.depth_m / 2.0};
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "[scenario]\n";
  os << "num_aps = " << cfg.num_aps << "\n";
  os << "num_ues = " << cfg.num_ues << "\n";
  os << "grt_s = " << fmt_double(cfg.grt_s) << "\n";
  os << "slot_s = " << fmt_double(cfg.slot_s) << "\n";
  os << "mean_file_bytes = " << fmt_double(cfg.mean_file_bytes) << "\n";
  os << "mean_iat_s = " << fmt_double(cfg.mean_iat_s) << "\n";
  os << "rho = " << fmt_double(cfg.rho) << "\n";
  os << "delta_frac = " << fmt_double(cfg.delta_frac) << "\n";
  os << "macro_rate_bps = " << fmt_double(cfg.macro_rate_bps) << "\n";
  os << "macro_tx_dbm = " << fmt_double(cfg.macro_tx_dbm) << "\n";
  os << "ap_tx_dbm = " << fmt_double(cfg.ap_tx_dbm) << "\n";
  os << "ap_bandwidth_hz = " << fmt_double(cfg.ap_bandwidth_hz) << "\n";
  os << "bw_eff = " << fmt_double(cfg.bw_eff) << "\n";
  os << "snr_eff = " << fmt_double(cfg.snr_eff) << "\n";
  os << "alpha = " << fmt_double(cfg.alpha) << "\n";
  os << "n_c = " << cfg.n_c << "\n";
  os << "r_init_bps = " << fmt_double(cfg.r_init_bps) << "\n";
  os << "scheduler = " << to_string(cfg.scheduler) << "\n";
  os << "srtf_order = " << to_string(cfg.srtf_order) << "\n";
  os << "ts_h_mode = " << to_string(cfg.ts_h_mode) << "\n";
  os << "rng_seed = " << cfg.rng_seed << "\n";

  os << "\n[gate]\n";
  os << "width_m = " << fmt_double(cfg.gate.width_m) << "\n";
  os << "depth_m = " << fmt_double(cfg.gate.depth_m) << "\n";
  os << "ap_height_m = " << fmt_double(cfg.gate.ap_height_m) << "\n";
  os << "entrance = " << fmt_double(cfg.gate.entrance.x) << ", " << fmt_double(cfg.gate.entrance.y)
     << "\n";
  os << "exit = " << fmt_double(cfg.gate.exit.x) << ", " << fmt_double(cfg.gate.exit.y) << "\n";
  if (!cfg.gate.ap_positions.empty()) {
    os << "ap_positions = ";
    for (std::size_t i = 0; i < cfg.gate.ap_positions.size(); ++i) {
      const Vec3& p = cfg.gate.ap_positions[i];
      if (i) os << "; ";
      os << fmt_double(p.x) << " " << fmt_double(p.y) << " " << fmt_double(p.z);
    }
    os << "\n";
  }

  os << "\n[mobility]\n";
  os << "mode = " << to_string(cfg.mobility.mode) << "\n";
  os << "mean_speed_mps = " << fmt_double(cfg.mobility.mean_speed_mps) << "\n";
  os << "speed_ratio = " << fmt_double(cfg.mobility.speed_ratio) << "\n";
  os << "heading_jitter_rad = " << fmt_double(cfg.mobility.heading_jitter_rad) << "\n";

  os << "\n[channel]\n";
  os << "carrier_hz = " << fmt_double(cfg.channel.carrier_hz) << "\n";
  os << "main_lobe_gain_db = " << fmt_double(cfg.channel.main_lobe_gain_db) << "\n";
  os << "side_lobe_gain_db = " << fmt_double(cfg.channel.side_lobe_gain_db) << "\n";
  os << "noise_figure_db = " << fmt_double(cfg.channel.noise_figure_db) << "\n";
  os << "blockage_prob_max = " << fmt_double(cfg.channel.blockage_prob_max) << "\n";
  os << "blockage_loss_db = " << fmt_double(cfg.channel.blockage_loss_db) << "\n";
  os << "pathloss_exponent = " << fmt_double(cfg.channel.pathloss_exponent) << "\n";

  os << "\n[energy]\n";
  os << "ue_power_mmw_w = " << fmt_double(cfg.energy.ue_power_mmw_w) << "\n";
  os << "ue_power_macro_w = " << fmt_double(cfg.energy.ue_power_macro_w) << "\n";
  return os.str();
}

}  // namespace gatesim
