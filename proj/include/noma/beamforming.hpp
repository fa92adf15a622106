#pragma once

// Per-cluster NOMA beamforming under SINR targets.
//
// A cluster is a strong user (h1) and a weak user (h2) sharing one beam
// w. Feasible (w, P1, P2) must satisfy
//   K1: |h1^H w|^2 >= |h2^H w|^2          (SIC gain ordering)
//   K2: |h1^H w|^2 P1 >= G1 sigma^2       (strong-user SINR after SIC)
//   K3: |h2^H w|^2 P2 >= (|h2^H w|^2 P1 + sigma^2) G2
// For a fixed beam the cheapest powers make K2 and K3 tight. The beam
// minimizing P1 + P2 lies in span{h1, h2} (components orthogonal to both
// channels contribute to no gain), so the optimizer parameterizes
//   w = cos(theta) u1 + sin(theta) e^{j phi} u2
// over an orthonormal basis {u1, u2} of the (projected) span and runs a
// dense grid plus golden-section refinement; the returned total is within
// 1e-6 relative of the best grid value.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "noma/channel.hpp"
#include "noma/common.hpp"
#include "noma/linalg.hpp"

namespace noma {

struct Cluster {
  ComplexVector h1;   // strong-user channel
  ComplexVector h2;   // weak-user channel
  double g1 = 1.0;    // target SINR at user 1, linear
  double g2 = 1.0;    // target SINR at user 2, linear
  double noise = 1.0; // sigma^2

  Cluster(ComplexVector h1_in, ComplexVector h2_in, double g1_in, double g2_in,
          double noise_in)
      : h1(std::move(h1_in)),
        h2(std::move(h2_in)),
        g1(g1_in),
        g2(g2_in),
        noise(noise_in) {
    validate_channel(h1);
    validate_channel(h2);
    if (h1.size() != h2.size()) {
      throw std::invalid_argument("Cluster: h1 and h2 must have equal length");
    }
    if (norm_sq(h1) == 0.0 || norm_sq(h2) == 0.0) {
      throw std::invalid_argument("Cluster: channels must be nonzero");
    }
    if (!(g1 >= 0.0) || !(g2 >= 0.0) || !std::isfinite(g1) || !std::isfinite(g2)) {
      throw std::invalid_argument("Cluster: SINR targets must be >= 0");
    }
    if (!(noise > 0.0) || !std::isfinite(noise)) {
      throw std::invalid_argument("Cluster: noise power must be > 0");
    }
  }

  std::size_t antennas() const { return h1.size(); }
};

struct Beam {
  ComplexVector w;

  explicit Beam(ComplexVector w_in) : w(std::move(w_in)) {
    validate_channel(w);
    if (std::abs(norm(w) - 1.0) > 1e-12) {
      throw std::invalid_argument("Beam: weight vector must be unit norm");
    }
  }

  static Beam normalized(ComplexVector v) {
    const double n = norm(v);
    if (n == 0.0) {
      throw std::invalid_argument("Beam: cannot normalize the zero vector");
    }
    return Beam(scaled(std::move(v), Complex{1.0 / n, 0.0}));
  }
};

struct ClusterSolution {
  Beam beam;
  double p1 = 0.0;
  double p2 = 0.0;
  double total = 0.0;
};

/// SINR at the weak user: |h2^H w|^2 p2 / (|h2^H w|^2 p1 + sigma^2).
inline double sinr_weak(const Cluster& c, const Beam& beam, double p1,
                        double p2) {
  const double gain = std::norm(hdot(c.h2, beam.w));
  return gain * p2 / (gain * p1 + c.noise);
}

/// K1-K3 check. tol (default 0: the exact inequalities) relaxes each
/// right-hand side by the factor (1 - tol) for numerical verification.
inline bool constraints_satisfied(const Cluster& c, const Beam& beam,
                                  double p1, double p2, double tol = 0.0) {
  const double gain1 = std::norm(hdot(c.h1, beam.w));
  const double gain2 = std::norm(hdot(c.h2, beam.w));
  const double relax = 1.0 - tol;
  if (!(gain1 >= gain2 * relax)) return false;
  if (!(gain1 * p1 >= c.g1 * c.noise * relax)) return false;
  if (!(gain2 * p2 >= (gain2 * p1 + c.noise) * c.g2 * relax)) return false;
  return true;
}

/// Minimum powers for a fixed beam: K2 and K3 tight,
///   p1 = G1 sigma^2 / |h1^H w|^2,
///   p2 = G2 (p1 + sigma^2 / |h2^H w|^2).
/// No smaller feasible pair exists since K2/K3 are monotone in (p1, p2).
inline ClusterSolution powers_for_beam(const Cluster& c, const Beam& beam) {
  const double gain1 = std::norm(hdot(c.h1, beam.w));
  const double gain2 = std::norm(hdot(c.h2, beam.w));
  if (gain1 < gain2) {
    throw InfeasibleError("powers_for_beam: beam violates the SIC gain ordering (K1)");
  }
  double p1 = 0.0;
  if (c.g1 > 0.0) {
    if (!(gain1 > 0.0)) {
      throw InfeasibleError("powers_for_beam: zero effective gain for the strong user");
    }
    p1 = c.g1 * c.noise / gain1;
  }
  double p2 = 0.0;
  if (c.g2 > 0.0) {
    if (!(gain2 > 0.0)) {
      throw InfeasibleError("powers_for_beam: zero effective gain for the weak user");
    }
    p2 = c.g2 * (p1 + c.noise / gain2);
  }
  return ClusterSolution{beam, p1, p2, p1 + p2};
}

namespace detail {

inline constexpr int kBeamGridTheta = 512;
inline constexpr int kBeamGridPhi = 512;

/// Golden-section minimization of a unimodal-ish 1-D slice.
template <typename F>
inline std::pair<double, double> golden_min(F&& f, double lo, double hi,
                                            int iters = 90) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters && (b - a) > 1e-14; ++i) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace detail

/// Beam minimizing p1 + p2 subject to K1-K3 over unit-norm w, optionally
/// restricted to the span of an orthonormal `effective_subspace` basis
/// (empty = full space). Throws InfeasibleError when K1 cannot be met or
/// the channels vanish in the subspace.
inline ClusterSolution optimize_beam(
    const Cluster& c,
    const std::vector<ComplexVector>& effective_subspace = {}) {
  const bool restricted = !effective_subspace.empty();
  const ComplexVector ph1 = restricted ? project_onto(c.h1, effective_subspace) : c.h1;
  const ComplexVector ph2 = restricted ? project_onto(c.h2, effective_subspace) : c.h2;
  const std::vector<ComplexVector> span = orthonormal_basis({ph1, ph2});
  if (span.empty()) {
    throw InfeasibleError("optimize_beam: channels vanish in the allowed subspace");
  }

  // Complex channel components along the span directions; for w in the
  // span these determine the effective gains exactly.
  const Complex a1 = hdot(c.h1, span[0]);
  const Complex a2 = hdot(c.h2, span[0]);
  const Complex b1 = span.size() > 1 ? hdot(c.h1, span[1]) : Complex{};
  const Complex b2 = span.size() > 1 ? hdot(c.h2, span[1]) : Complex{};

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const auto total_at = [&](double cos_t, double sin_t, Complex phase) {
    const double gain1 = std::norm(cos_t * a1 + sin_t * phase * b1);
    const double gain2 = std::norm(cos_t * a2 + sin_t * phase * b2);
    if (gain1 < gain2) return kInf;  // K1
    double p1 = 0.0;
    if (c.g1 > 0.0) {
      if (!(gain1 > 0.0)) return kInf;
      p1 = c.g1 * c.noise / gain1;
    }
    double p2 = 0.0;
    if (c.g2 > 0.0) {
      if (!(gain2 > 0.0)) return kInf;
      p2 = c.g2 * (p1 + c.noise / gain2);
    }
    return p1 + p2;
  };

  double best_theta = 0.0, best_phi = 0.0;
  double best = kInf;
  if (span.size() == 1) {
    best = total_at(1.0, 0.0, Complex{1.0, 0.0});
  } else {
    const int nt = detail::kBeamGridTheta;
    const int np = detail::kBeamGridPhi;
    std::vector<double> cos_t(nt), sin_t(nt);
    for (int i = 0; i < nt; ++i) {
      const double theta = (std::numbers::pi / 2.0) * i / (nt - 1);
      cos_t[i] = std::cos(theta);
      sin_t[i] = std::sin(theta);
    }
    std::vector<Complex> phase(np);
    for (int j = 0; j < np; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / np;
      phase[j] = Complex{std::cos(phi), std::sin(phi)};
    }
    int bi = -1, bj = -1;
    for (int i = 0; i < nt; ++i) {
      for (int j = 0; j < np; ++j) {
        const double t = total_at(cos_t[i], sin_t[i], phase[j]);
        if (t < best) {
          best = t;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi >= 0) {
      best_theta = (std::numbers::pi / 2.0) * bi / (nt - 1);
      best_phi = 2.0 * std::numbers::pi * bj / np;
      const double dt = (std::numbers::pi / 2.0) / (nt - 1);
      const double dp = 2.0 * std::numbers::pi / np;
      const auto eval = [&](double theta, double phi) {
        return total_at(std::cos(theta), std::sin(theta),
                        Complex{std::cos(phi), std::sin(phi)});
      };
      for (int round = 0; round < 25; ++round) {
        const double before = best;
        const auto [th, ft] = detail::golden_min(
            [&](double x) { return eval(x, best_phi); },
            std::max(0.0, best_theta - dt),
            std::min(std::numbers::pi / 2.0, best_theta + dt));
        if (ft < best) {
          best = ft;
          best_theta = th;
        }
        const auto [ph, fp] = detail::golden_min(
            [&](double x) { return eval(best_theta, x); }, best_phi - dp,
            best_phi + dp);  // phi is periodic; no clamping needed
        if (fp < best) {
          best = fp;
          best_phi = ph;
        }
        if (before - best < 1e-13 * std::max(1.0, std::abs(best))) break;
      }
    }
  }
  if (!std::isfinite(best)) {
    throw InfeasibleError(
        "optimize_beam: K1 unsatisfiable within the search space");
  }

  ComplexVector w(c.antennas(), Complex{0.0, 0.0});
  const double ct = std::cos(best_theta);
  const double st = std::sin(best_theta);
  const Complex ph{std::cos(best_phi), std::sin(best_phi)};
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = ct * span[0][i];
    if (span.size() > 1) w[i] += st * ph * span[1][i];
  }
  return powers_for_beam(c, Beam::normalized(std::move(w)));
}

/// Per-cluster orthonormal bases of the zero-forcing complement: for each
/// cluster, the orthogonal complement of the span of every other
/// cluster's channel vectors (both users). Beams built inside a
/// cluster's complement put exact nulls on all other clusters' users.
/// Throws InfeasibleError naming the first cluster whose complement is
/// empty (not enough antennas for the required nulls).
inline std::vector<std::vector<ComplexVector>> zf_complements(
    const std::vector<Cluster>& clusters) {
  if (clusters.empty()) {
    throw std::invalid_argument("zf_complements: no clusters");
  }
  const std::size_t dim = clusters.front().antennas();
  for (const Cluster& c : clusters) {
    if (c.antennas() != dim) {
      throw std::invalid_argument("zf_complements: clusters must share the antenna count");
    }
  }
  std::vector<std::vector<ComplexVector>> bases;
  bases.reserve(clusters.size());
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    std::vector<ComplexVector> null_set;
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      if (j == i) continue;
      null_set.push_back(clusters[j].h1);
      null_set.push_back(clusters[j].h2);
    }
    std::vector<ComplexVector> complement = orthogonal_complement(null_set, dim);
    if (complement.empty()) {
      throw InfeasibleError("zf_multicluster: cluster " + std::to_string(i) +
                            ": not enough antennas to null the other clusters");
    }
    bases.push_back(std::move(complement));
  }
  return bases;
}

/// Zero-forcing multi-cluster beamforming: optimize each cluster's beam
/// inside its ZF complement. With a single cluster this reduces to
/// optimize_beam over the full space.
inline std::vector<ClusterSolution> zf_multicluster(
    const std::vector<Cluster>& clusters) {
  const auto bases = zf_complements(clusters);
  std::vector<ClusterSolution> solutions;
  solutions.reserve(clusters.size());
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    solutions.push_back(optimize_beam(clusters[i], bases[i]));
  }
  return solutions;
}

/// OMA reference for one cluster: each user gets half the resource and a
/// matched single-user beam (the projected channel direction). Matching
/// the NOMA per-user rate log2(1+G) in a half slot requires SINR
/// (1+G)^2 - 1, and the reported power is the time average of the two
/// half-slot powers. This is a modeling choice; the comparison baseline
/// is stated here because no standard definition exists.
inline double oma_cluster_power(const Cluster& c,
                                const std::vector<ComplexVector>& subspace = {}) {
  double total = 0.0;
  const std::pair<const ComplexVector*, double> users[2] = {{&c.h1, c.g1},
                                                            {&c.h2, c.g2}};
  for (const auto& [h, g] : users) {
    const ComplexVector ph = subspace.empty() ? *h : project_onto(*h, subspace);
    const double gain = norm_sq(ph);
    if (!(gain > 0.0)) {
      throw InfeasibleError("oma_cluster_power: channel vanishes in the subspace");
    }
    const double half_slot_sinr = (1.0 + g) * (1.0 + g) - 1.0;
    total += half_slot_sinr * c.noise / gain;
  }
  return total / 2.0;
}

struct Fig3Row {
  int antennas = 0;
  double noma_mean_power = 0.0;
  double oma_mean_power = 0.0;
  double infeasible_rate = 0.0;
};

/// Clusters for one Monte Carlo trial of the power-vs-antennas
/// experiment. user_distances holds (strong, weak) pairs, one pair per
/// cluster; the two users of a cluster share one spatial direction (the
/// idealized fully-correlated cluster) drawn per (seed, antennas, trial),
/// scaled by each user's path loss.
inline std::vector<Cluster> draw_fig3_clusters(const FadingSpec& spec,
                                               int antennas,
                                               std::uint64_t trial, double g1,
                                               double g2) {
  spec.validate();
  if (spec.user_distances.size() < 2 || spec.user_distances.size() % 2 != 0) {
    throw std::invalid_argument(
        "draw_fig3_clusters: user_distances must hold (strong, weak) pairs");
  }
  const std::size_t m = spec.user_distances.size() / 2;
  FadingSpec direction;
  direction.antenna_count = antennas;
  direction.user_distances.assign(m, 1.0);
  direction.path_loss_exponent = 0.0;
  direction.seed =
      derive_seed(derive_seed(spec.seed, static_cast<std::uint64_t>(antennas)), trial);
  std::vector<Cluster> clusters;
  clusters.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    double ds = spec.user_distances[2 * i];
    double dw = spec.user_distances[2 * i + 1];
    if (ds > dw) std::swap(ds, dw);  // strong user is the closer one
    const ComplexVector v = draw_channel(direction, i);
    const double ss = std::pow(ds, -spec.path_loss_exponent / 2.0);
    const double sw = std::pow(dw, -spec.path_loss_exponent / 2.0);
    clusters.emplace_back(scaled(v, Complex{ss, 0.0}), scaled(v, Complex{sw, 0.0}),
                          g1, g2, 1.0);
  }
  return clusters;
}

/// Mean per-slot transmit power (sum over clusters) for ZF-NOMA and the
/// OMA reference on the same channel draws, one row per antenna count.
/// Infeasible trials are excluded from both means and reported as a
/// rate. Trials are accumulated in trial order so results do not depend
/// on scheduling.
inline std::vector<Fig3Row> fig3_experiment(const std::vector<int>& antenna_counts,
                                            int trials, const FadingSpec& spec,
                                            double g1, double g2) {
  if (trials < 1) {
    throw std::invalid_argument("fig3_experiment: trials must be >= 1");
  }
  if (!(g1 > 0.0) || !(g2 > 0.0)) {
    throw std::invalid_argument("fig3_experiment: SINR targets must be > 0");
  }
  std::vector<Fig3Row> rows;
  rows.reserve(antenna_counts.size());
  for (int antennas : antenna_counts) {
    if (antennas < 1) {
      throw std::invalid_argument("fig3_experiment: antenna counts must be >= 1");
    }
    double noma_sum = 0.0;
    double oma_sum = 0.0;
    int feasible = 0;
    int infeasible = 0;
    for (int t = 0; t < trials; ++t) {
      const std::vector<Cluster> clusters =
          draw_fig3_clusters(spec, antennas, static_cast<std::uint64_t>(t), g1, g2);
      try {
        const auto bases = zf_complements(clusters);
        double noma_t = 0.0;
        double oma_t = 0.0;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
          noma_t += optimize_beam(clusters[i], bases[i]).total;
          oma_t += oma_cluster_power(clusters[i], bases[i]);
        }
        noma_sum += noma_t;
        oma_sum += oma_t;
        ++feasible;
      } catch (const InfeasibleError&) {
        ++infeasible;
      }
    }
    if (feasible == 0) {
      throw InfeasibleError("fig3_experiment: every trial infeasible at L=" +
                            std::to_string(antennas));
    }
    rows.push_back(Fig3Row{antennas, noma_sum / feasible, oma_sum / feasible,
                           static_cast<double>(infeasible) / trials});
  }
  return rows;
}

}  // namespace noma
