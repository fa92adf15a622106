#pragma once

// Uncoordinated uplink NOMA: slotted-ALOHA throughput, the two-power-level
// NOMA-ALOHA closed form, and a Monte Carlo simulator for the
// power-frequency resource grid (B subcarriers x L power levels).
//
// The analytic two-level formula is implemented exactly as
//   T = K p (1-p)^{K-1} + (1/2) C(K,2) p^2 (1-p)^{K-2},
// counting the two-user term once (with its 1/2 coefficient). A
// both-decoded reading would double that term; the simulator provides the
// empirical counterpart so the two can be compared rather than silently
// reconciled.
//
// Two combinatorial decoding models bracket the unspecified physical
// model. Power levels are abstract (no physical SINR capture):
//  - independent_subchannel: a packet succeeds iff no other user picked
//    the same (subcarrier, level) cell; every cell acts as its own ALOHA
//    channel (optimistic).
//  - sic_blocking: per subcarrier, levels decode from highest (index 0)
//    to lowest; a level with exactly one user succeeds and is stripped, a
//    level with two or more users fails and aborts every lower level on
//    that subcarrier (conservative).

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "noma/channel.hpp"
#include "noma/common.hpp"

namespace noma {

enum class DecodingModel {
  independent_subchannel,
  sic_blocking,
};

inline std::string to_string(DecodingModel m) {
  return m == DecodingModel::independent_subchannel ? "independent_subchannel"
                                                    : "sic_blocking";
}

inline DecodingModel decoding_model_from_string(const std::string& s) {
  if (s == "independent_subchannel") return DecodingModel::independent_subchannel;
  if (s == "sic_blocking") return DecodingModel::sic_blocking;
  throw std::invalid_argument("unknown decoding model: " + s);
}

struct RaConfig {
  int users = 1;
  double access_prob = 0.0;
  int power_levels = 1;
  int subcarriers = 1;
  DecodingModel decoding_model = DecodingModel::independent_subchannel;
  int trials = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (users < 1) throw std::invalid_argument("RaConfig: users must be >= 1");
    if (!(access_prob >= 0.0) || !(access_prob <= 1.0)) {
      throw std::invalid_argument("RaConfig: access_prob must be in [0, 1]");
    }
    if (power_levels < 1) throw std::invalid_argument("RaConfig: power_levels must be >= 1");
    if (subcarriers < 1) throw std::invalid_argument("RaConfig: subcarriers must be >= 1");
    if (trials < 1) throw std::invalid_argument("RaConfig: trials must be >= 1");
  }
};

/// Slotted ALOHA: T = K p (1-p)^{K-1}.
inline double aloha_throughput(int users, double access_prob) {
  if (users < 1) throw std::invalid_argument("aloha_throughput: users must be >= 1");
  if (!(access_prob >= 0.0) || !(access_prob <= 1.0)) {
    throw std::invalid_argument("aloha_throughput: access_prob must be in [0, 1]");
  }
  return users * access_prob * std::pow(1.0 - access_prob, users - 1);
}

/// Two-power-level NOMA-ALOHA closed form (see the file header for the
/// coefficient convention).
inline double noma_aloha_throughput_2level(int users, double access_prob) {
  if (users < 2) {
    throw std::invalid_argument("noma_aloha_throughput_2level: requires K >= 2");
  }
  if (!(access_prob >= 0.0) || !(access_prob <= 1.0)) {
    throw std::invalid_argument("noma_aloha_throughput_2level: access_prob must be in [0, 1]");
  }
  const double p = access_prob;
  const double pairs = 0.5 * users * (users - 1);  // C(K, 2)
  return aloha_throughput(users, p) +
         0.5 * pairs * p * p * std::pow(1.0 - p, users - 2);
}

struct SimResult {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo throughput of multichannel NOMA-ALOHA. Each user
/// transmits with probability p_a and picks a (subcarrier, level) cell
/// uniformly; successes per slot are counted under the configured
/// decoding model. Per-trial RNG streams derive from (seed, trial), and
/// trials accumulate in index order, so the result is reproducible and
/// scheduling-independent.
inline SimResult simulate_multichannel(const RaConfig& config) {
  config.validate();
  const int cells = config.subcarriers * config.power_levels;
  std::vector<int> occupancy(static_cast<std::size_t>(cells));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int trial = 0; trial < config.trials; ++trial) {
    std::mt19937_64 eng(derive_seed(config.seed, static_cast<std::uint64_t>(trial)));
    std::fill(occupancy.begin(), occupancy.end(), 0);
    for (int u = 0; u < config.users; ++u) {
      if (uniform01(eng) >= config.access_prob) continue;
      const int b = std::min(config.subcarriers - 1,
                             static_cast<int>(uniform01(eng) * config.subcarriers));
      const int l = std::min(config.power_levels - 1,
                             static_cast<int>(uniform01(eng) * config.power_levels));
      ++occupancy[static_cast<std::size_t>(b * config.power_levels + l)];
    }
    int successes = 0;
    if (config.decoding_model == DecodingModel::independent_subchannel) {
      for (int cell = 0; cell < cells; ++cell) {
        if (occupancy[static_cast<std::size_t>(cell)] == 1) ++successes;
      }
    } else {
      for (int b = 0; b < config.subcarriers; ++b) {
        for (int l = 0; l < config.power_levels; ++l) {  // 0 = highest power
          const int n = occupancy[static_cast<std::size_t>(b * config.power_levels + l)];
          if (n == 0) continue;
          if (n == 1) {
            ++successes;  // decoded and stripped
          } else {
            break;  // collision aborts every lower level on this subcarrier
          }
        }
      }
    }
    sum += successes;
    sum_sq += static_cast<double>(successes) * successes;
  }
  SimResult r;
  r.mean = sum / config.trials;
  if (config.trials > 1) {
    const double var =
        (sum_sq - sum * sum / config.trials) / (config.trials - 1);
    r.std_error = std::sqrt(std::max(0.0, var) / config.trials);
  }
  return r;
}

struct ThroughputCurve {
  std::vector<std::pair<double, double>> points;  // (p_a, throughput)
  std::pair<double, double> peak;                 // max over points
};

/// 101 uniform points on [0, 1].
inline std::vector<double> default_pa_grid() {
  std::vector<double> grid(101);
  for (int i = 0; i <= 100; ++i) grid[static_cast<std::size_t>(i)] = i / 100.0;
  return grid;
}

/// True when the configuration has a closed-form throughput: one
/// subcarrier with one power level (pure ALOHA) or two power levels (the
/// two-level NOMA-ALOHA formula). Everything else is simulated.
inline bool analytic_compatible(const RaConfig& config) {
  return config.subcarriers == 1 &&
         (config.power_levels == 1 ||
          (config.power_levels == 2 && config.users >= 2));
}

/// Throughput over a p_a grid: analytic where a closed form exists,
/// simulated otherwise. The peak is the grid argmax (first hit on ties).
inline ThroughputCurve throughput_curve(const RaConfig& config,
                                        const std::vector<double>& pa_grid) {
  config.validate();
  if (pa_grid.empty()) {
    throw std::invalid_argument("throughput_curve: empty grid");
  }
  const bool analytic = analytic_compatible(config);
  ThroughputCurve curve;
  curve.points.reserve(pa_grid.size());
  for (double p : pa_grid) {
    if (!(p >= 0.0) || !(p <= 1.0)) {
      throw std::invalid_argument("throughput_curve: grid values must be in [0, 1]");
    }
    double t = 0.0;
    if (analytic) {
      t = config.power_levels == 1 ? aloha_throughput(config.users, p)
                                   : noma_aloha_throughput_2level(config.users, p);
    } else {
      RaConfig point = config;
      point.access_prob = p;
      t = simulate_multichannel(point).mean;
    }
    curve.points.emplace_back(p, t);
    if (curve.points.size() == 1 || t > curve.peak.second) {
      curve.peak = {p, t};
    }
  }
  return curve;
}

/// Golden-section refinement of the analytic peak around the grid
/// argmax; only defined for analytic-compatible configurations.
inline std::pair<double, double> refined_analytic_peak(const RaConfig& config) {
  if (!analytic_compatible(config)) {
    throw std::invalid_argument("refined_analytic_peak: no closed form for this config");
  }
  const auto f = [&](double p) {
    return config.power_levels == 1 ? aloha_throughput(config.users, p)
                                    : noma_aloha_throughput_2level(config.users, p);
  };
  constexpr double invphi = 0.6180339887498949;
  double a = 0.0, b = 1.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-12) {
    if (f1 >= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  const double p = 0.5 * (a + b);
  return {p, f(p)};
}

}  // namespace noma
