#pragma once

// Uplink NOMA rate computations: total mutual information at the base
// station and its chain-rule decomposition into per-user SIC rates.
//
// The decoding order is the sequence in which signals are decoded and
// stripped: order[0] is decoded first (every other user still present as
// interference), order[K-1] last (interference-free). User indices in
// `order` are 0-based.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "noma/common.hpp"

namespace noma {

struct UplinkScenario {
  std::vector<double> gains;        // beta_k = |g_k|^2
  std::vector<double> powers;       // Q_k
  std::vector<std::size_t> order;   // decoding order, first-decoded first

  UplinkScenario(std::vector<double> gains_in, std::vector<double> powers_in,
                 std::vector<std::size_t> order_in)
      : gains(std::move(gains_in)),
        powers(std::move(powers_in)),
        order(std::move(order_in)) {
    const std::size_t K = gains.size();
    if (K == 0 || powers.size() != K || order.size() != K) {
      throw std::invalid_argument(
          "UplinkScenario: gains, powers, order must be non-empty and equal length");
    }
    for (double b : gains) {
      if (!(b > 0.0) || !std::isfinite(b)) {
        throw std::invalid_argument("UplinkScenario: gains must be positive");
      }
    }
    for (double q : powers) {
      if (!(q >= 0.0) || !std::isfinite(q)) {
        throw std::invalid_argument("UplinkScenario: powers must be >= 0");
      }
    }
    std::vector<bool> seen(K, false);
    for (std::size_t u : order) {
      if (u >= K || seen[u]) {
        throw std::invalid_argument(
            "UplinkScenario: order must be a permutation of 0..K-1");
      }
      seen[u] = true;
    }
  }

  std::size_t user_count() const { return gains.size(); }
};

inline void to_json(nlohmann::json& j, const UplinkScenario& s) {
  j = nlohmann::json{
      {"gains", s.gains}, {"powers", s.powers}, {"order", s.order}};
}

inline UplinkScenario uplink_scenario_from_json(const nlohmann::json& j) {
  return UplinkScenario(j.at("gains").get<std::vector<double>>(),
                        j.at("powers").get<std::vector<double>>(),
                        j.at("order").get<std::vector<std::size_t>>());
}

/// Mutual information between the received signal and all user signals,
/// log2(1 + sum_k beta_k Q_k); independent of the decoding order.
inline double total_mutual_information(const UplinkScenario& s) {
  double sum = 0.0;
  for (std::size_t k = 0; k < s.user_count(); ++k) {
    sum += s.gains[k] * s.powers[k];
  }
  return log2_1p(sum);
}

/// Per-user SIC rates for the scenario's decoding order, indexed by
/// user (entry k is user k's rate). The user decoded at position j sees
/// only the not-yet-decoded users as interference:
///
///   R = log2(1 + beta Q / (1 + sum_{later-decoded} beta_l Q_l)),
///
/// and the rates telescope: their sum equals total_mutual_information.
inline std::vector<double> sic_rates(const UplinkScenario& s) {
  const std::size_t K = s.user_count();
  // suffix[j] = interference power of users decoded at positions > j
  std::vector<double> suffix(K + 1, 0.0);
  for (std::size_t j = K; j-- > 0;) {
    const std::size_t u = s.order[j];
    suffix[j] = suffix[j + 1] + s.gains[u] * s.powers[u];
  }
  std::vector<double> rates(K, 0.0);
  for (std::size_t j = 0; j < K; ++j) {
    const std::size_t u = s.order[j];
    rates[u] = log2_1p(s.gains[u] * s.powers[u] / (1.0 + suffix[j + 1]));
  }
  return rates;
}

/// True iff every user's rate is strictly below its SIC rate for the
/// scenario's decoding order.
inline bool feasible_rate_tuple(const UplinkScenario& s,
                                const std::vector<double>& rates) {
  if (rates.size() != s.user_count()) {
    throw std::invalid_argument("feasible_rate_tuple: length mismatch");
  }
  const std::vector<double> achievable = sic_rates(s);
  for (std::size_t k = 0; k < rates.size(); ++k) {
    if (!(rates[k] < achievable[k])) return false;
  }
  return true;
}

}  // namespace noma
