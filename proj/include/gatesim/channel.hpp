// Parametric 60 GHz link model: log-distance path loss with a free-space
// reference at 1 m, a two-gain (main/side lobe) beam abstraction, Bernoulli
// human-body blockage, and Shannon capacity with bandwidth/SNR efficiencies.
// All co-channel APs interfere; an AP's emission toward anyone but its own
// user goes through side lobes at both ends.
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gatesim/geometry.hpp"
#include "gatesim/model.hpp"
#include "gatesim/rng.hpp"

namespace gatesim {

class NotServed : public std::logic_error {
 public:
  NotServed() : std::logic_error("sinr_linear: user not served in this assignment") {}
};

// Radio scalars the channel math needs, bundled from ScenarioConfig.
struct RadioParams {
  double tx_dbm = 10.0;
  double bandwidth_hz = 2.16e9;
  double bw_eff = 0.7;
  double snr_eff = 1.0;
  ChannelConfig ch;
};

RadioParams make_radio_params(const ScenarioConfig& cfg);

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

// PL(d) = 20 log10(4 pi d0 f / c) + 10 n log10(d / d0), d0 = 1 m.
// Distances below 0.1 m are clamped to 0.1 m.
double path_loss_db(double distance_m, const ChannelConfig& cfg);

// Thermal noise floor: -174 dBm/Hz + 10 log10(B) + NF.
double noise_dbm(const RadioParams& radio);

// C = bw_eff * B * log2(1 + sinr / snr_eff).
double capacity_bps(double sinr_linear, const RadioParams& radio);

// Per-link blockage flags for one slot; indexed by (ap_id, ue_id).
struct BlockageState {
  int num_aps = 0;
  int num_ues = 0;
  std::vector<std::uint8_t> blocked;

  bool is_blocked(int ap_id, int ue_id) const {
    return blocked[static_cast<std::size_t>(ap_id) * static_cast<std::size_t>(num_ues) +
                   static_cast<std::size_t>(ue_id)] != 0;
  }
};

// Holds the per-link blocking probabilities drawn once per gate traversal
// (p ~ U(0, blockage_prob_max)); each slot's state is an independent
// Bernoulli sample per link.
class BlockageModel {
 public:
  BlockageModel(int num_aps, int num_ues, const ChannelConfig& cfg, RngStream& rng);
  BlockageState sample_slot(RngStream& rng) const;
  const std::vector<double>& link_probs() const { return probs_; }

 private:
  int num_aps_;
  int num_ues_;
  std::vector<double> probs_;
};

// SINR of ue_id's serving link under this assignment's interference pattern.
// aps are indexed by ap_id; ues by ue_id. Throws NotServed when the user has
// no link in the assignment.
double sinr_linear(const Assignment& assignment, int ue_id, std::span<const Vec3> aps,
                   std::span<const UserEquipment> ues, const BlockageState& blockage,
                   const RadioParams& radio);

// Capacity lookup over every injective AP->UE mapping of one slot. Because
// the side-lobe abstraction makes interference depend only on which APs are
// active, capacities are stored per active-AP subset and mappings are
// enumerated on demand, in lexicographic order (per AP: pool UEs ascending,
// idle last).
class CapacityTable {
 public:
  static CapacityTable build(std::span<const Vec3> aps, std::span<const UserEquipment> ues,
                             std::span<const int> pool_ue_ids, const BlockageState& blockage,
                             const RadioParams& radio);

  int num_aps() const { return num_aps_; }
  int pool_size() const { return pool_size_; }
  int ue_id_at(int pool_idx) const { return ue_ids_[static_cast<std::size_t>(pool_idx)]; }

  // Link budget of ap serving pool_idx while exactly `active_mask` APs
  // (bit a = AP a) transmit. Bit `ap` must be set in active_mask.
  double link_sinr(int ap, int pool_idx, unsigned active_mask) const {
    return sinr_[index(ap, pool_idx, active_mask)];
  }
  double link_capacity_bps(int ap, int pool_idx, unsigned active_mask) const {
    return cap_[index(ap, pool_idx, active_mask)];
  }
  double distance_m(int ap, int pool_idx) const {
    return dist_[static_cast<std::size_t>(ap) * static_cast<std::size_t>(pool_size_) +
                 static_cast<std::size_t>(pool_idx)];
  }

  // f(mapping, active_mask): mapping[a] is the pool index served by AP a or
  // -1 when idle. Candidate filter decides which pool entries an AP may
  // serve (used to skip users with nothing to send).
  template <typename F, typename Eligible>
  void for_each_mapping(F&& f, Eligible&& eligible) const {
    std::vector<int> mapping(static_cast<std::size_t>(num_aps_), -1);
    std::uint32_t used = 0;
    enumerate(0, 0u, used, mapping, f, eligible);
  }
  template <typename F>
  void for_each_mapping(F&& f) const {
    for_each_mapping(std::forward<F>(f), [](int) { return true; });
  }

  std::size_t mapping_count() const;       // every injective mapping incl. partial
  std::size_t full_mapping_count() const;  // mappings with no idle AP

 private:
  std::size_t index(int ap, int pool_idx, unsigned mask) const {
    return (static_cast<std::size_t>(mask) * static_cast<std::size_t>(num_aps_) +
            static_cast<std::size_t>(ap)) *
               static_cast<std::size_t>(pool_size_) +
           static_cast<std::size_t>(pool_idx);
  }

  template <typename F, typename Eligible>
  void enumerate(int ap, unsigned mask, std::uint32_t& used, std::vector<int>& mapping, F& f,
                 Eligible& eligible) const {
    if (ap == num_aps_) {
      f(std::span<const int>(mapping), mask);
      return;
    }
    for (int p = 0; p < pool_size_; ++p) {
      if (used & (1u << p)) continue;
      if (!eligible(p)) continue;
      mapping[static_cast<std::size_t>(ap)] = p;
      used |= (1u << p);
      enumerate(ap + 1, mask | (1u << ap), used, mapping, f, eligible);
      used &= ~(1u << p);
    }
    mapping[static_cast<std::size_t>(ap)] = -1;  // idle last
    enumerate(ap + 1, mask, used, mapping, f, eligible);
  }

  int num_aps_ = 0;
  int pool_size_ = 0;
  std::vector<int> ue_ids_;
  std::vector<double> sinr_;  // [mask][ap][pool]
  std::vector<double> cap_;
  std::vector<double> dist_;  // [ap][pool]
};

}  // namespace gatesim
