#include "gatesim/channel.hpp"

#include <cmath>

namespace gatesim {

namespace {
constexpr double kSpeedOfLight = 299792458.0;
constexpr double kMinDistanceM = 0.1;
}  // namespace

RadioParams make_radio_params(const ScenarioConfig& cfg) {
  return RadioParams{cfg.ap_tx_dbm, cfg.ap_bandwidth_hz, cfg.bw_eff, cfg.snr_eff, cfg.channel};
}

double path_loss_db(double distance_m, const ChannelConfig& cfg) {
  const double d = std::max(distance_m, kMinDistanceM);
  const double ref = 20.0 * std::log10(4.0 * M_PI * 1.0 * cfg.carrier_hz / kSpeedOfLight);
  return ref + 10.0 * cfg.pathloss_exponent * std::log10(d);
}

double noise_dbm(const RadioParams& radio) {
  return -174.0 + 10.0 * std::log10(radio.bandwidth_hz) + radio.ch.noise_figure_db;
}

double capacity_bps(double sinr_linear, const RadioParams& radio) {
  return radio.bw_eff * radio.bandwidth_hz * std::log2(1.0 + sinr_linear / radio.snr_eff);
}

BlockageModel::BlockageModel(int num_aps, int num_ues, const ChannelConfig& cfg, RngStream& rng)
    : num_aps_(num_aps), num_ues_(num_ues) {
  probs_.resize(static_cast<std::size_t>(num_aps) * static_cast<std::size_t>(num_ues));
  for (auto& p : probs_) p = rng.uniform(0.0, cfg.blockage_prob_max);
}

BlockageState BlockageModel::sample_slot(RngStream& rng) const {
  BlockageState st;
  st.num_aps = num_aps_;
  st.num_ues = num_ues_;
  st.blocked.resize(probs_.size());
  for (std::size_t i = 0; i < probs_.size(); ++i)
    st.blocked[i] = rng.bernoulli(probs_[i]) ? 1 : 0;
  return st;
}

namespace {

// Received power over one link; gains_db is the sum of both antenna gains
// (main+main when serving, side+side toward anyone else's user).
double rx_power_dbm(const Vec3& ap, const Vec2& ue_pos, double tx_dbm, double gains_db,
                    bool blocked, const ChannelConfig& ch) {
  double p = tx_dbm + gains_db - path_loss_db(distance(ap, ue_pos), ch);
  if (blocked) p -= ch.blockage_loss_db;
  return p;
}

}  // namespace

double sinr_linear(const Assignment& assignment, int ue_id, std::span<const Vec3> aps,
                   std::span<const UserEquipment> ues, const BlockageState& blockage,
                   const RadioParams& radio) {
  const AssignedLink* serving = assignment.link_for_ue(ue_id);
  if (!serving) throw NotServed();

  const Vec2& pos = ues[static_cast<std::size_t>(ue_id)].position;
  const double main_gains = 2.0 * radio.ch.main_lobe_gain_db;
  const double side_gains = 2.0 * radio.ch.side_lobe_gain_db;

  const double signal_mw =
      dbm_to_mw(rx_power_dbm(aps[static_cast<std::size_t>(serving->ap_id)], pos, radio.tx_dbm,
                             main_gains, blockage.is_blocked(serving->ap_id, ue_id), radio.ch));
  double interference_mw = 0.0;
  for (const auto& link : assignment.links) {
    if (link.ap_id == serving->ap_id) continue;
    interference_mw +=
        dbm_to_mw(rx_power_dbm(aps[static_cast<std::size_t>(link.ap_id)], pos, radio.tx_dbm,
                               side_gains, blockage.is_blocked(link.ap_id, ue_id), radio.ch));
  }
  return signal_mw / (interference_mw + dbm_to_mw(noise_dbm(radio)));
}

CapacityTable CapacityTable::build(std::span<const Vec3> aps, std::span<const UserEquipment> ues,
                                   std::span<const int> pool_ue_ids, const BlockageState& blockage,
                                   const RadioParams& radio) {
  CapacityTable t;
  t.num_aps_ = static_cast<int>(aps.size());
  t.pool_size_ = static_cast<int>(pool_ue_ids.size());
  t.ue_ids_.assign(pool_ue_ids.begin(), pool_ue_ids.end());

  const int a_count = t.num_aps_;
  const int p_count = t.pool_size_;
  const std::size_t links = static_cast<std::size_t>(a_count) * static_cast<std::size_t>(p_count);

  // Main-lobe and side-lobe received powers per link, blockage applied.
  std::vector<double> main_mw(links);
  std::vector<double> side_mw(links);
  t.dist_.resize(links);
  const double main_gains = 2.0 * radio.ch.main_lobe_gain_db;
  const double side_gains = 2.0 * radio.ch.side_lobe_gain_db;
  for (int a = 0; a < a_count; ++a) {
    for (int p = 0; p < p_count; ++p) {
      const int ue_id = t.ue_ids_[static_cast<std::size_t>(p)];
      const Vec2& pos = ues[static_cast<std::size_t>(ue_id)].position;
      const bool blocked = blockage.is_blocked(a, ue_id);
      const std::size_t i = static_cast<std::size_t>(a) * static_cast<std::size_t>(p_count) +
                            static_cast<std::size_t>(p);
      t.dist_[i] = distance(aps[static_cast<std::size_t>(a)], pos);
      main_mw[i] =
          dbm_to_mw(rx_power_dbm(aps[static_cast<std::size_t>(a)], pos, radio.tx_dbm, main_gains,
                                 blocked, radio.ch));
      side_mw[i] =
          dbm_to_mw(rx_power_dbm(aps[static_cast<std::size_t>(a)], pos, radio.tx_dbm, side_gains,
                                 blocked, radio.ch));
    }
  }

  const double noise_mw = dbm_to_mw(noise_dbm(radio));
  const unsigned mask_count = 1u << a_count;
  t.sinr_.assign(static_cast<std::size_t>(mask_count) * links, 0.0);
  t.cap_.assign(static_cast<std::size_t>(mask_count) * links, 0.0);

  std::vector<double> side_sum(static_cast<std::size_t>(p_count));
  for (unsigned mask = 1; mask < mask_count; ++mask) {
    for (int p = 0; p < p_count; ++p) side_sum[static_cast<std::size_t>(p)] = 0.0;
    for (int a = 0; a < a_count; ++a) {
      if (!(mask & (1u << a))) continue;
      for (int p = 0; p < p_count; ++p)
        side_sum[static_cast<std::size_t>(p)] +=
            side_mw[static_cast<std::size_t>(a) * static_cast<std::size_t>(p_count) +
                    static_cast<std::size_t>(p)];
    }
    for (int a = 0; a < a_count; ++a) {
      if (!(mask & (1u << a))) continue;
      for (int p = 0; p < p_count; ++p) {
        const std::size_t li = static_cast<std::size_t>(a) * static_cast<std::size_t>(p_count) +
                               static_cast<std::size_t>(p);
        const double interference = side_sum[static_cast<std::size_t>(p)] - side_mw[li];
        const double s = main_mw[li] / (interference + noise_mw);
        const std::size_t idx = t.index(a, p, mask);
        t.sinr_[idx] = s;
        t.cap_[idx] = capacity_bps(s, radio);
      }
    }
  }
  return t;
}

std::size_t CapacityTable::mapping_count() const {
  // sum over j of C(A, j) * P! / (P - j)!
  std::size_t total = 0;
  for (int j = 0; j <= num_aps_ && j <= pool_size_; ++j) {
    std::size_t choose = 1;
    for (int i = 0; i < j; ++i)
      choose = choose * static_cast<std::size_t>(num_aps_ - i) / static_cast<std::size_t>(i + 1);
    std::size_t perm = 1;
    for (int i = 0; i < j; ++i) perm *= static_cast<std::size_t>(pool_size_ - i);
    total += choose * perm;
  }
  return total;
}

std::size_t CapacityTable::full_mapping_count() const {
  if (pool_size_ < num_aps_) return 0;
  std::size_t perm = 1;
  for (int i = 0; i < num_aps_; ++i) perm *= static_cast<std::size_t>(pool_size_ - i);
  return perm;
}

}  // namespace gatesim
