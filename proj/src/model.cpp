#include "gatesim/model.hpp"

#include <cmath>
#include <sstream>

namespace gatesim {

const char* to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::Wpf: return "wpf";
    case SchedulerKind::Pf: return "pf";
    case SchedulerKind::Rr: return "rr";
  }
  return "?";
}

const char* to_string(MobilityMode m) {
  return m == MobilityMode::RandomWalk ? "random_walk" : "directed";
}

const char* to_string(SrtfOrder o) {
  return o == SrtfOrder::Deadline ? "deadline" : "size";
}

const char* to_string(TsHorizonMode m) {
  return m == TsHorizonMode::Dynamic ? "dynamic" : "static";
}

InvalidConfig::InvalidConfig(std::vector<std::string> issues)
    : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

std::string InvalidConfig::join(const std::vector<std::string>& issues) {
  std::ostringstream os;
  os << "invalid config (" << issues.size() << " issue" << (issues.size() == 1 ? "" : "s") << "):";
  for (const auto& s : issues) os << "\n  - " << s;
  return os.str();
}

namespace {

bool finite(double v) { return std::isfinite(v); }

void require(std::vector<std::string>& issues, bool ok, const std::string& msg) {
  if (!ok) issues.push_back(msg);
}

void require_positive(std::vector<std::string>& issues, double v, const char* field) {
  require(issues, finite(v) && v > 0.0, std::string(field) + ": must be finite and > 0");
}

void require_finite(std::vector<std::string>& issues, double v, const char* field) {
  require(issues, finite(v), std::string(field) + ": must be finite");
}

}  // namespace

ValidatedConfig validate(ScenarioConfig cfg) {
  std::vector<std::string> issues;

  require(issues, cfg.num_aps >= 1 && cfg.num_aps <= 4,
          "scenario.num_aps: must be in 1..4");
  require(issues, cfg.num_ues >= 1, "scenario.num_ues: must be >= 1");
  require_positive(issues, cfg.grt_s, "scenario.grt_s");
  require_positive(issues, cfg.slot_s, "scenario.slot_s");
  require_positive(issues, cfg.mean_file_bytes, "scenario.mean_file_bytes");
  require_positive(issues, cfg.mean_iat_s, "scenario.mean_iat_s");
  require_positive(issues, cfg.rho, "scenario.rho");
  require(issues, finite(cfg.delta_frac) && cfg.delta_frac >= 0.0,
          "scenario.delta_frac: must be finite and >= 0");
  if (finite(cfg.rho) && cfg.rho > 1.0 && finite(cfg.delta_frac)) {
    require(issues, cfg.delta_frac < (cfg.rho - 1.0) / 2.0,
            "scenario.delta_frac: must be < (rho-1)/2 when rho > 1");
  }
  require_positive(issues, cfg.macro_rate_bps, "scenario.macro_rate_bps");
  require_finite(issues, cfg.macro_tx_dbm, "scenario.macro_tx_dbm");
  require_finite(issues, cfg.ap_tx_dbm, "scenario.ap_tx_dbm");
  require_positive(issues, cfg.ap_bandwidth_hz, "scenario.ap_bandwidth_hz");
  require_positive(issues, cfg.bw_eff, "scenario.bw_eff");
  require_positive(issues, cfg.snr_eff, "scenario.snr_eff");
  require(issues, finite(cfg.alpha) && cfg.alpha >= 0.0 && cfg.alpha <= 1.0,
          "scenario.alpha: must be within [0,1]");
  require(issues, cfg.n_c >= 1, "scenario.n_c: must be >= 1");
  require_positive(issues, cfg.r_init_bps, "scenario.r_init_bps");

  // Gate geometry.
  require_positive(issues, cfg.gate.width_m, "gate.width_m");
  require_positive(issues, cfg.gate.depth_m, "gate.depth_m");
  require_positive(issues, cfg.gate.ap_height_m, "gate.ap_height_m");
  require_finite(issues, cfg.gate.entrance.x, "gate.entrance.x");
  require_finite(issues, cfg.gate.entrance.y, "gate.entrance.y");
  require_finite(issues, cfg.gate.exit.x, "gate.exit.x");
  require_finite(issues, cfg.gate.exit.y, "gate.exit.y");
  require(issues, !(cfg.gate.entrance == cfg.gate.exit), "gate.entrance: must differ from gate.exit");

  const bool box_ok = finite(cfg.gate.width_m) && cfg.gate.width_m > 0.0 &&
                      finite(cfg.gate.depth_m) && cfg.gate.depth_m > 0.0;
  auto in_box_2d = [&](const Vec2& p) {
    return p.x >= 0.0 && p.x <= cfg.gate.width_m && p.y >= 0.0 && p.y <= cfg.gate.depth_m;
  };
  if (box_ok) {
    require(issues, in_box_2d(cfg.gate.entrance), "gate.entrance: must lie inside the gate box");
    require(issues, in_box_2d(cfg.gate.exit), "gate.exit: must lie inside the gate box");
  }

  if (cfg.gate.ap_positions.empty() && box_ok && cfg.num_aps >= 1 && cfg.num_aps <= 4 &&
      finite(cfg.gate.ap_height_m) && cfg.gate.ap_height_m > 0.0) {
    // Auto layout: evenly spaced along the centerline, ceiling height.
    for (int i = 0; i < cfg.num_aps; ++i) {
      double frac = (static_cast<double>(i) + 0.5) / static_cast<double>(cfg.num_aps);
      cfg.gate.ap_positions.push_back(
          Vec3{frac * cfg.gate.width_m, cfg.gate.depth_m / 2.0, cfg.gate.ap_height_m});
    }
  }
  require(issues, static_cast<int>(cfg.gate.ap_positions.size()) >= cfg.num_aps,
          "gate.ap_positions: fewer positions than scenario.num_aps");
  for (std::size_t i = 0; i < cfg.gate.ap_positions.size(); ++i) {
    const Vec3& p = cfg.gate.ap_positions[i];
    bool ok = finite(p.x) && finite(p.y) && finite(p.z) && p.z >= 0.0 &&
              (!box_ok || (p.x >= 0.0 && p.x <= cfg.gate.width_m && p.y >= 0.0 &&
                           p.y <= cfg.gate.depth_m));
    require(issues, ok,
            "gate.ap_positions[" + std::to_string(i) + "]: must lie inside the gate box");
  }

  // Mobility.
  require_positive(issues, cfg.mobility.mean_speed_mps, "mobility.mean_speed_mps");
  require(issues, finite(cfg.mobility.speed_ratio) && cfg.mobility.speed_ratio >= 1.0,
          "mobility.speed_ratio: must be >= 1");
  require(issues, finite(cfg.mobility.heading_jitter_rad) && cfg.mobility.heading_jitter_rad >= 0.0,
          "mobility.heading_jitter_rad: must be finite and >= 0");

  // Channel.
  require_positive(issues, cfg.channel.carrier_hz, "channel.carrier_hz");
  require_finite(issues, cfg.channel.main_lobe_gain_db, "channel.main_lobe_gain_db");
  require_finite(issues, cfg.channel.side_lobe_gain_db, "channel.side_lobe_gain_db");
  require_finite(issues, cfg.channel.noise_figure_db, "channel.noise_figure_db");
  require(issues,
          finite(cfg.channel.blockage_prob_max) && cfg.channel.blockage_prob_max >= 0.0 &&
              cfg.channel.blockage_prob_max <= 1.0,
          "channel.blockage_prob_max: must be within [0,1]");
  require(issues, finite(cfg.channel.blockage_loss_db) && cfg.channel.blockage_loss_db >= 0.0,
          "channel.blockage_loss_db: must be finite and >= 0");
  require(issues, finite(cfg.channel.pathloss_exponent) && cfg.channel.pathloss_exponent >= 2.0,
          "channel.pathloss_exponent: must be >= 2");

  // Energy.
  require_positive(issues, cfg.energy.ue_power_mmw_w, "energy.ue_power_mmw_w");
  require_positive(issues, cfg.energy.ue_power_macro_w, "energy.ue_power_macro_w");

  if (!issues.empty()) throw InvalidConfig(std::move(issues));
  return ValidatedConfig(std::move(cfg));
}

bool Assignment::serves(int ue_id) const { return link_for_ue(ue_id) != nullptr; }

const AssignedLink* Assignment::link_for_ue(int ue_id) const {
  for (const auto& l : links)
    if (l.ue_id == ue_id) return &l;
  return nullptr;
}

}  // namespace gatesim
