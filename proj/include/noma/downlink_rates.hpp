#pragma once

// Downlink SIC achievable rates and rate-region membership.
//
// Users are indexed 1..K in the public API, ordered by nonincreasing
// channel gain (user 1 is the strongest). All rates are in bits per
// channel use; noise variance is normalized to 1, so powers are SNR
// units.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "noma/common.hpp"

namespace noma {

struct DownlinkScenario {
  std::vector<double> gains;                  // alpha_k, sorted nonincreasing
  std::vector<double> powers;                 // P_k
  std::optional<std::vector<double>> rates;   // R_k (optional targets)

  DownlinkScenario(std::vector<double> gains_in, std::vector<double> powers_in,
                   std::optional<std::vector<double>> rates_in = std::nullopt)
      : gains(std::move(gains_in)),
        powers(std::move(powers_in)),
        rates(std::move(rates_in)) {
    if (gains.empty() || gains.size() != powers.size()) {
      throw std::invalid_argument(
          "DownlinkScenario: gains and powers must be non-empty and equal length");
    }
    for (double a : gains) {
      if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::invalid_argument("DownlinkScenario: gains must be positive");
      }
    }
    for (std::size_t i = 1; i < gains.size(); ++i) {
      if (gains[i] > gains[i - 1]) {
        throw std::invalid_argument(
            "DownlinkScenario: gains must be sorted nonincreasing");
      }
    }
    for (double p : powers) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("DownlinkScenario: powers must be >= 0");
      }
    }
    if (rates) {
      if (rates->size() != gains.size()) {
        throw std::invalid_argument(
            "DownlinkScenario: rates must match gains in length");
      }
      for (double r : *rates) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
          throw std::invalid_argument("DownlinkScenario: rates must be >= 0");
        }
      }
    }
  }

  std::size_t user_count() const { return gains.size(); }
};

inline void to_json(nlohmann::json& j, const DownlinkScenario& s) {
  j = nlohmann::json{{"gains", s.gains}, {"powers", s.powers}};
  if (s.rates) j["rates"] = *s.rates;
}

inline DownlinkScenario downlink_scenario_from_json(const nlohmann::json& j) {
  std::optional<std::vector<double>> rates;
  if (j.contains("rates")) rates = j.at("rates").get<std::vector<double>>();
  return DownlinkScenario(j.at("gains").get<std::vector<double>>(),
                          j.at("powers").get<std::vector<double>>(),
                          std::move(rates));
}

/// Achievable rate C_{l;k} for the signal to user l decoded at user k
/// under SIC in descending order (signals to users l+1..K already
/// removed, signals to users 1..l-1 treated as interference):
///
///   C_{l;k} = log2(1 + alpha_k P_l / (alpha_k sum_{m<l} P_m + 1)).
///
/// l and k are 1-based; requires k <= l.
inline double achievable_rate(const DownlinkScenario& s, std::size_t l,
                              std::size_t k) {
  const std::size_t K = s.user_count();
  if (l < 1 || l > K || k < 1) {
    throw std::out_of_range("achievable_rate: index out of range");
  }
  if (k > l) {
    throw std::invalid_argument("achievable_rate: requires k <= l");
  }
  const double alpha = s.gains[k - 1];
  double interference = 0.0;
  for (std::size_t m = 0; m + 1 < l; ++m) interference += s.powers[m];
  return log2_1p(alpha * s.powers[l - 1] / (alpha * interference + 1.0));
}

/// Full rate-region membership: R_l < C_{l;k} for every k and every
/// l >= k. Strict inequalities; `tol` relaxes each comparison to
/// R_l < C_{l;k} + tol for numerical boundary tests (default exact).
inline bool in_rate_region(const DownlinkScenario& s, double tol = 0.0) {
  if (!s.rates) {
    throw std::invalid_argument("in_rate_region: scenario has no rates");
  }
  const std::size_t K = s.user_count();
  for (std::size_t k = 1; k <= K; ++k) {
    for (std::size_t l = k; l <= K; ++l) {
      if (!((*s.rates)[l - 1] < achievable_rate(s, l, k) + tol)) return false;
    }
  }
  return true;
}

/// Reduced membership test under the nonincreasing-gain ordering:
/// R_l < C_{l;l} for all l. Equivalent to in_rate_region on every
/// sorted scenario because C_{l;k} >= C_{l;l} for k <= l.
inline bool reduced_region_check(const DownlinkScenario& s, double tol = 0.0) {
  if (!s.rates) {
    throw std::invalid_argument("reduced_region_check: scenario has no rates");
  }
  const std::size_t K = s.user_count();
  for (std::size_t l = 1; l <= K; ++l) {
    if (!((*s.rates)[l - 1] < achievable_rate(s, l, l) + tol)) return false;
  }
  return true;
}

}  // namespace noma
