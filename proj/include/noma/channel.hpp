#pragma once

// Seeded generation of flat-fading channel vectors.
//
// Randomness contract (pinned so independent reimplementations can match
// the integer stream):
//  - per-draw stream: std::mt19937_64 (the standard fixes its integer
//    output) seeded with derive_seed(spec.seed, user_index), where
//    derive_seed(s, i) = splitmix64(splitmix64(s) + i) and splitmix64 is
//    the stateless finalizer of Steele et al.'s SplitMix64;
//  - uniforms: u = (x >> 11) * 2^-53 in [0, 1) from each 64-bit word x;
//  - standard normal pairs: Box-Muller, trigonometric form, on one
//    uniform pair: r = sqrt(-2 ln(1 - u1)), z0 = r cos(2 pi u2),
//    z1 = r sin(2 pi u2);
//  - complex entry: (z0 + j z1) / sqrt(2) * d^(-ple/2), one Box-Muller
//    pair per entry, so E|entry|^2 = d^(-ple) (unit-variance CSCG at
//    unit distance).
// Floating-point values are reproducible bit-for-bit on one platform;
// across platforms they agree to libm accuracy on top of an identical
// integer stream.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "noma/linalg.hpp"

namespace noma {

/// SplitMix64 finalizer; bijective 64-bit mix.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Sub-stream seed for (seed, index); chain calls to derive deeper
/// streams, e.g. derive_seed(derive_seed(seed, trial), cluster).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) + index);
}

inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// One standard-normal pair via trigonometric Box-Muller.
inline std::pair<double, double> normal_pair(std::mt19937_64& eng) {
  const double u1 = uniform01(eng);
  const double u2 = uniform01(eng);
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  const double a = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

struct FadingSpec {
  int antenna_count = 1;
  std::vector<double> user_distances;   // normalized distance units
  double path_loss_exponent = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (antenna_count < 1) {
      throw std::invalid_argument("FadingSpec: antenna_count must be >= 1");
    }
    if (path_loss_exponent < 0.0) {
      throw std::invalid_argument(
          "FadingSpec: path_loss_exponent must be >= 0");
    }
    if (user_distances.empty()) {
      throw std::invalid_argument("FadingSpec: user_distances must be non-empty");
    }
    for (double d : user_distances) {
      if (!(d > 0.0)) {
        throw std::invalid_argument("FadingSpec: distances must be > 0");
      }
    }
  }
};

inline void to_json(nlohmann::json& j, const FadingSpec& s) {
  j = nlohmann::json{{"antenna_count", s.antenna_count},
                     {"user_distances", s.user_distances},
                     {"path_loss_exponent", s.path_loss_exponent},
                     {"seed", s.seed}};
}

inline void from_json(const nlohmann::json& j, FadingSpec& s) {
  j.at("antenna_count").get_to(s.antenna_count);
  j.at("user_distances").get_to(s.user_distances);
  j.at("path_loss_exponent").get_to(s.path_loss_exponent);
  j.at("seed").get_to(s.seed);
}

/// L-entry CSCG channel vector for one user, scaled by
/// distance^(-path_loss_exponent/2). Pure function of (spec, user_index).
inline ComplexVector draw_channel(const FadingSpec& spec,
                                  std::size_t user_index) {
  spec.validate();
  if (user_index >= spec.user_distances.size()) {
    throw std::out_of_range("draw_channel: user_index out of range");
  }
  const double scale = std::pow(spec.user_distances[user_index],
                                -spec.path_loss_exponent / 2.0);
  std::mt19937_64 eng(derive_seed(spec.seed, user_index));
  ComplexVector h(static_cast<std::size_t>(spec.antenna_count));
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (Complex& e : h) {
    const auto [z0, z1] = normal_pair(eng);
    e = Complex{z0, z1} * (inv_sqrt2 * scale);
  }
  return h;
}

}  // namespace noma
