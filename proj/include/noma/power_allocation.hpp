#pragma once

// Downlink power allocation: closed-form total-power minimization under
// per-user rate targets, sum-rate maximization under a power budget, and
// the K = 2 rate-region boundary sweep.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "noma/common.hpp"
#include "noma/downlink_rates.hpp"

namespace noma {

struct RateTargets {
  std::vector<double> targets;  // required minimum rates, bits/channel use

  explicit RateTargets(std::vector<double> t) : targets(std::move(t)) {
    for (double r : targets) {
      if (!(r >= 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument("RateTargets: targets must be finite and >= 0");
      }
    }
  }
};

struct PowerSolution {
  std::vector<double> powers;  // P_k^*
  double total = 0.0;          // ||p||_1
};

namespace detail {

inline void require_sorted_positive_gains(const std::vector<double>& gains) {
  if (gains.empty()) {
    throw std::invalid_argument("gains must be non-empty");
  }
  for (double a : gains) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("gains must be positive");
    }
  }
  for (std::size_t i = 1; i < gains.size(); ++i) {
    if (gains[i] > gains[i - 1]) {
      throw std::invalid_argument("gains must be sorted nonincreasing");
    }
  }
}

}  // namespace detail

/// Minimum total power meeting every per-user rate target, with gains
/// sorted nonincreasing. Computed by the greedy recursion
///
///   P_k^* = (2^{Rbar_k} - 1) (sum_{l<k} P_l^* + 1/alpha_k),
///
/// in ascending k; each C_{k;k} constraint comes out tight. With a
/// total-power cap the solution is rejected as infeasible if it
/// exceeds the cap (the uncapped problem is the default).
inline PowerSolution min_power_allocation(
    const std::vector<double>& gains, const RateTargets& targets,
    std::optional<double> total_power_cap = std::nullopt) {
  detail::require_sorted_positive_gains(gains);
  if (targets.targets.size() != gains.size()) {
    throw std::invalid_argument(
        "min_power_allocation: targets must match gains in length");
  }
  PowerSolution sol;
  sol.powers.reserve(gains.size());
  double prefix = 0.0;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    const double p = exp2m1(targets.targets[k]) * (prefix + 1.0 / gains[k]);
    sol.powers.push_back(p);
    prefix += p;
  }
  sol.total = prefix;
  if (total_power_cap && sol.total > *total_power_cap) {
    throw InfeasibleError("min_power_allocation: required total power " +
                          std::to_string(sol.total) + " exceeds cap " +
                          std::to_string(*total_power_cap));
  }
  return sol;
}

struct SumRateSolution {
  PowerSolution allocation;
  double sum_rate = 0.0;  // bits/channel use
};

/// Sum-rate maximization under a total power budget has the closed-form
/// solution P_1 = P_T, P_k = 0 otherwise; the sum rate is
/// log2(1 + alpha_1 P_T).
inline SumRateSolution max_sum_rate_allocation(const std::vector<double>& gains,
                                               double total_power) {
  detail::require_sorted_positive_gains(gains);
  if (!(total_power >= 0.0) || !std::isfinite(total_power)) {
    throw std::invalid_argument("max_sum_rate_allocation: total_power must be >= 0");
  }
  SumRateSolution sol;
  sol.allocation.powers.assign(gains.size(), 0.0);
  sol.allocation.powers[0] = total_power;
  sol.allocation.total = total_power;
  sol.sum_rate = log2_1p(gains[0] * total_power);
  return sol;
}

/// Pareto boundary of the two-user reduced rate region for a total power
/// budget: P_1 swept over a uniform grid on [0, P_T] (P_2 = P_T - P_1),
/// emitting (C_{1;1}, C_{2;2}) pairs.
inline std::vector<std::pair<double, double>> rate_region_boundary(
    const std::vector<double>& gains, double total_power, int grid_points) {
  detail::require_sorted_positive_gains(gains);
  if (gains.size() != 2) {
    throw std::invalid_argument("rate_region_boundary: requires exactly K = 2");
  }
  if (grid_points < 2) {
    throw std::invalid_argument("rate_region_boundary: grid_points must be >= 2");
  }
  if (!(total_power > 0.0) || !std::isfinite(total_power)) {
    throw std::invalid_argument("rate_region_boundary: total_power must be > 0");
  }
  std::vector<std::pair<double, double>> curve;
  curve.reserve(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    const double p1 = total_power * static_cast<double>(i) /
                      static_cast<double>(grid_points - 1);
    const double p2 = total_power - p1;
    DownlinkScenario s(gains, {p1, p2});
    curve.emplace_back(achievable_rate(s, 1, 1), achievable_rate(s, 2, 2));
  }
  return curve;
}

}  // namespace noma
