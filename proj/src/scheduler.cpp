#include "gatesim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gatesim {

double inst_rate_bps(double capacity_bps, std::int64_t remaining_bytes, double slot_s) {
  const double drain_rate = 8.0 * static_cast<double>(remaining_bytes) / slot_s;
  return std::min(capacity_bps, drain_rate);
}

double priority_weight(double ts_k_s, double ts_h_s) {
  if (ts_k_s <= 0.0) throw DegenerateStay();
  return ts_h_s / ts_k_s;
}

std::vector<double> priority_weights(std::span<const double> ts_s, double ts_h_s) {
  std::vector<double> w(ts_s.size(), 1.0);
  double max_finite = 0.0;
  for (std::size_t i = 0; i < ts_s.size(); ++i) {
    if (ts_s[i] > 0.0) {
      w[i] = ts_h_s / ts_s[i];
      max_finite = std::max(max_finite, w[i]);
    } else {
      w[i] = std::numeric_limits<double>::quiet_NaN();  // placeholder
    }
  }
  if (max_finite <= 0.0) max_finite = 1.0;
  for (auto& x : w)
    if (std::isnan(x)) x = max_finite;
  return w;
}

double utility(double r_bps, double avg_rate_bps, double weight, double alpha) {
  return (r_bps / avg_rate_bps) * std::pow(weight, alpha);
}

double update_avg_rate(double r_prev_bps, double r_bps, bool scheduled, int n_c) {
  const double inv = 1.0 / static_cast<double>(n_c);
  return (1.0 - inv) * r_prev_bps + inv * (scheduled ? r_bps : 0.0);
}

namespace {

std::vector<double> pool_weights(const SchedulerInputs& inputs) {
  std::vector<double> ts(inputs.ues.size());
  for (std::size_t i = 0; i < inputs.ues.size(); ++i) ts[i] = inputs.ues[i].stay_s;
  return priority_weights(ts, inputs.ts_h_s);
}

}  // namespace

std::optional<int> select_single(const SchedulerInputs& inputs) {
  const auto w = pool_weights(inputs);
  std::optional<int> best;
  double best_u = 0.0;
  for (std::size_t i = 0; i < inputs.ues.size(); ++i) {
    const auto& ue = inputs.ues[i];
    if (!ue.eligible || ue.single_ap_rate_bps <= 0.0) continue;
    const double u = utility(ue.single_ap_rate_bps, ue.avg_rate_bps, w[i], inputs.alpha);
    if (!best || u > best_u) {
      best = ue.ue_id;
      best_u = u;
    }
  }
  return best;
}

Assignment select_multi(const SchedulerInputs& inputs, const CapacityTable& table, int num_aps) {
  const int a_count = std::min(num_aps, table.num_aps());
  const int p_count = table.pool_size();

  // Pool-aligned views of the inputs (the table pool is a subset of the
  // input rows, both ascending by ue_id).
  std::vector<const UeSchedInput*> in(static_cast<std::size_t>(p_count), nullptr);
  {
    std::size_t j = 0;
    for (int p = 0; p < p_count; ++p) {
      const int ue_id = table.ue_id_at(p);
      while (j < inputs.ues.size() && inputs.ues[j].ue_id != ue_id) ++j;
      if (j == inputs.ues.size())
        throw std::logic_error("select_multi: table pool user missing from inputs");
      in[static_cast<std::size_t>(p)] = &inputs.ues[j];
    }
  }

  const auto weights_all = pool_weights(inputs);
  std::vector<double> wpow(static_cast<std::size_t>(p_count));
  std::vector<double> inv_avg(static_cast<std::size_t>(p_count));
  std::vector<double> max_rate(static_cast<std::size_t>(p_count));
  std::vector<char> eligible(static_cast<std::size_t>(p_count));
  for (int p = 0; p < p_count; ++p) {
    const UeSchedInput& u = *in[static_cast<std::size_t>(p)];
    const std::size_t row = static_cast<std::size_t>(&u - inputs.ues.data());
    wpow[static_cast<std::size_t>(p)] = std::pow(weights_all[row], inputs.alpha);
    inv_avg[static_cast<std::size_t>(p)] = 1.0 / u.avg_rate_bps;
    max_rate[static_cast<std::size_t>(p)] =
        8.0 * static_cast<double>(u.remaining_bytes) / inputs.slot_s;
    eligible[static_cast<std::size_t>(p)] = (u.eligible && u.remaining_bytes > 0) ? 1 : 0;
  }

  // Utility of every link under every active-AP subset, table layout.
  const unsigned mask_count = 1u << a_count;
  std::vector<double> u_cache(static_cast<std::size_t>(mask_count) *
                                  static_cast<std::size_t>(a_count) *
                                  static_cast<std::size_t>(p_count),
                              0.0);
  for (unsigned mask = 1; mask < mask_count; ++mask) {
    for (int a = 0; a < a_count; ++a) {
      if (!(mask & (1u << a))) continue;
      for (int p = 0; p < p_count; ++p) {
        if (!eligible[static_cast<std::size_t>(p)]) continue;
        const double cap = table.link_capacity_bps(a, p, mask);
        const double r = std::min(cap, max_rate[static_cast<std::size_t>(p)]);
        u_cache[(static_cast<std::size_t>(mask) * static_cast<std::size_t>(a_count) +
                 static_cast<std::size_t>(a)) *
                    static_cast<std::size_t>(p_count) +
                static_cast<std::size_t>(p)] =
            r * inv_avg[static_cast<std::size_t>(p)] * wpow[static_cast<std::size_t>(p)];
      }
    }
  }

  std::vector<int> best_mapping(static_cast<std::size_t>(a_count), -1);
  unsigned best_mask = 0;
  double best_sum = -std::numeric_limits<double>::infinity();
  table.for_each_mapping(
      [&](std::span<const int> mapping, unsigned mask) {
        double sum = 0.0;
        for (int a = 0; a < a_count; ++a) {
          const int p = mapping[static_cast<std::size_t>(a)];
          if (p < 0) continue;
          sum += u_cache[(static_cast<std::size_t>(mask) * static_cast<std::size_t>(a_count) +
                          static_cast<std::size_t>(a)) *
                             static_cast<std::size_t>(p_count) +
                         static_cast<std::size_t>(p)];
        }
        if (sum > best_sum) {
          best_sum = sum;
          best_mask = mask;
          std::copy(mapping.begin(), mapping.end(), best_mapping.begin());
        }
      },
      [&](int p) { return eligible[static_cast<std::size_t>(p)] != 0; });

  Assignment out;
  for (int a = 0; a < a_count; ++a) {
    const int p = best_mapping[static_cast<std::size_t>(a)];
    if (p < 0) continue;
    AssignedLink link;
    link.ap_id = a;
    link.ue_id = table.ue_id_at(p);
    link.sinr_linear = table.link_sinr(a, p, best_mask);
    link.capacity_bps = table.link_capacity_bps(a, p, best_mask);
    link.rate_bps = std::min(link.capacity_bps, max_rate[static_cast<std::size_t>(p)]);
    link.utility = u_cache[(static_cast<std::size_t>(best_mask) * static_cast<std::size_t>(a_count) +
                            static_cast<std::size_t>(a)) *
                               static_cast<std::size_t>(p_count) +
                           static_cast<std::size_t>(p)];
    out.links.push_back(link);
    out.total_utility += link.utility;
  }
  return out;
}

Assignment round_robin(const SchedulerInputs& inputs, const CapacityTable& table, int num_aps,
                       int& cursor_ue_id) {
  const int a_count = std::min(num_aps, table.num_aps());
  const int p_count = table.pool_size();

  // Eligible pool indices in cyclic ue_id order after the cursor.
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(p_count));
  for (int pass = 0; pass < 2; ++pass) {
    for (int p = 0; p < p_count; ++p) {
      const int ue_id = table.ue_id_at(p);
      const bool after = ue_id > cursor_ue_id;
      if ((pass == 0) != after) continue;
      order.push_back(p);
    }
  }

  std::vector<const UeSchedInput*> in(static_cast<std::size_t>(p_count), nullptr);
  {
    std::size_t j = 0;
    for (int p = 0; p < p_count; ++p) {
      const int ue_id = table.ue_id_at(p);
      while (j < inputs.ues.size() && inputs.ues[j].ue_id != ue_id) ++j;
      if (j == inputs.ues.size())
        throw std::logic_error("round_robin: table pool user missing from inputs");
      in[static_cast<std::size_t>(p)] = &inputs.ues[j];
    }
  }

  std::vector<int> chosen;
  for (int p : order) {
    if (static_cast<int>(chosen.size()) == a_count) break;
    const UeSchedInput& u = *in[static_cast<std::size_t>(p)];
    if (u.eligible && u.remaining_bytes > 0) chosen.push_back(p);
  }
  if (chosen.empty()) return Assignment{};

  // Nearest-AP-first pairing in selection order.
  std::vector<int> ap_for(chosen.size(), -1);
  unsigned used_aps = 0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    int best_ap = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int a = 0; a < a_count; ++a) {
      if (used_aps & (1u << a)) continue;
      const double d = table.distance_m(a, chosen[i]);
      if (d < best_d) {
        best_d = d;
        best_ap = a;
      }
    }
    ap_for[i] = best_ap;
    used_aps |= (1u << best_ap);
  }

  const auto weights_all = pool_weights(inputs);
  Assignment out;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const int p = chosen[i];
    const int a = ap_for[i];
    const UeSchedInput& u = *in[static_cast<std::size_t>(p)];
    AssignedLink link;
    link.ap_id = a;
    link.ue_id = table.ue_id_at(p);
    link.sinr_linear = table.link_sinr(a, p, used_aps);
    link.capacity_bps = table.link_capacity_bps(a, p, used_aps);
    link.rate_bps = inst_rate_bps(link.capacity_bps, u.remaining_bytes, inputs.slot_s);
    const std::size_t row = static_cast<std::size_t>(&u - inputs.ues.data());
    link.utility = utility(link.rate_bps, u.avg_rate_bps, weights_all[row], inputs.alpha);
    out.links.push_back(link);
    out.total_utility += link.utility;
  }
  std::sort(out.links.begin(), out.links.end(),
            [](const AssignedLink& a, const AssignedLink& b) { return a.ap_id < b.ap_id; });
  cursor_ue_id = out.links.empty() ? cursor_ue_id : table.ue_id_at(chosen.back());
  return out;
}

}  // namespace gatesim
