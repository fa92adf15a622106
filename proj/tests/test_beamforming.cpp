#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "noma/beamforming.hpp"
#include "noma/channel.hpp"
#include "noma/common.hpp"
#include "oracles.hpp"

using namespace noma;

namespace {

ComplexVector random_channel(std::mt19937_64& eng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  ComplexVector v(n);
  for (auto& e : v) e = Complex{normal(eng), normal(eng)} * scale;
  return v;
}

// strong user first: reorder so that ||h1|| >= ||h2||
Cluster random_cluster(std::mt19937_64& eng, std::size_t n, double g1, double g2) {
  ComplexVector a = random_channel(eng, n, 1.5);
  ComplexVector b = random_channel(eng, n, 1.0);
  if (norm_sq(a) < norm_sq(b)) std::swap(a, b);
  return Cluster(std::move(a), std::move(b), g1, g2, 1.0);
}

}  // namespace

TEST_CASE("weak-user SINR") {
  const Cluster c({Complex{2.0, 0.0}}, {Complex{1.0, 0.0}}, 1.0, 1.0, 1.0);
  const Beam w({Complex{1.0, 0.0}});
  CHECK(sinr_weak(c, w, 1.0, 0.0) == 0.0);
  CHECK(sinr_weak(c, w, 1.0, 3.0) == Catch::Approx(1.5).epsilon(1e-12));

  // orthogonal weak channel sees no signal
  const Cluster c2({Complex{1.0, 0.0}, Complex{0.0, 0.0}},
                   {Complex{0.0, 0.0}, Complex{1.0, 0.0}}, 1.0, 1.0, 1.0);
  const Beam w2({Complex{1.0, 0.0}, Complex{0.0, 0.0}});
  CHECK(sinr_weak(c2, w2, 0.5, 4.0) == 0.0);
}

TEST_CASE("constraint set K1-K3 on the scalar example") {
  const Cluster c({Complex{2.0, 0.0}}, {Complex{1.0, 0.0}}, 1.0, 1.0, 1.0);
  const Beam w({Complex{1.0, 0.0}});
  CHECK_FALSE(constraints_satisfied(c, w, 0.0, 0.0));
  CHECK(constraints_satisfied(c, w, 0.25, 1.25));
  CHECK_FALSE(constraints_satisfied(c, w, 0.25, 1.2));   // K3 short
  CHECK_FALSE(constraints_satisfied(c, w, 0.2, 1.25));   // K2 short

  // swapping the users violates K1 regardless of powers
  const Cluster swapped({Complex{1.0, 0.0}}, {Complex{2.0, 0.0}}, 1.0, 1.0, 1.0);
  CHECK_FALSE(constraints_satisfied(swapped, w, 10.0, 10.0));
}

TEST_CASE("powers_for_beam makes K2 and K3 tight") {
  const Cluster c({Complex{2.0, 0.0}}, {Complex{1.0, 0.0}}, 1.0, 1.0, 1.0);
  const Beam w({Complex{1.0, 0.0}});
  const ClusterSolution sol = powers_for_beam(c, w);
  CHECK(sol.p1 == Catch::Approx(0.25).epsilon(1e-12));
  CHECK(sol.p2 == Catch::Approx(1.25).epsilon(1e-12));
  CHECK(sol.total == Catch::Approx(1.5).epsilon(1e-12));
  CHECK(constraints_satisfied(c, w, sol.p1, sol.p2, 1e-9));

  // degenerate weak target: no weak-user power at all
  const Cluster no_weak({Complex{2.0, 0.0}}, {Complex{1.0, 0.0}}, 1.0, 0.0, 1.0);
  CHECK(powers_for_beam(no_weak, w).p2 == 0.0);

  // homogeneity in the noise power
  const Cluster scaled_noise({Complex{2.0, 0.0}}, {Complex{1.0, 0.0}}, 1.0, 1.0, 3.0);
  const ClusterSolution sol3 = powers_for_beam(scaled_noise, w);
  CHECK(sol3.p1 == Catch::Approx(3.0 * sol.p1).epsilon(1e-12));
  CHECK(sol3.p2 == Catch::Approx(3.0 * sol.p2).epsilon(1e-12));

  const Cluster swapped({Complex{1.0, 0.0}}, {Complex{2.0, 0.0}}, 1.0, 1.0, 1.0);
  CHECK_THROWS_AS(powers_for_beam(swapped, w), InfeasibleError);
}

TEST_CASE("tightness holds on random beams and clusters") {
  std::mt19937_64 eng(5150);
  for (int trial = 0; trial < 100; ++trial) {
    const Cluster c = random_cluster(eng, 4, 10.0, 3.981);
    const Beam w = Beam::normalized(ComplexVector(c.h1));
    const ClusterSolution sol = powers_for_beam(c, w);
    const double gain1 = std::norm(hdot(c.h1, w.w));
    const double gain2 = std::norm(hdot(c.h2, w.w));
    CHECK(std::abs(gain1 * sol.p1 - c.g1 * c.noise) <= 1e-9 * c.g1 * c.noise);
    const double rhs = (gain2 * sol.p1 + c.noise) * c.g2;
    CHECK(std::abs(gain2 * sol.p2 - rhs) <= 1e-9 * rhs);
    CHECK(constraints_satisfied(c, w, sol.p1, sol.p2, 1e-9));
  }
}

TEST_CASE("identical channels want the matched-filter beam") {
  const ComplexVector h{Complex{1.0, 1.0}, Complex{0.5, -0.25}, Complex{0.0, 2.0}};
  const Cluster c(h, h, 10.0, 4.0, 1.0);
  const ClusterSolution sol = optimize_beam(c);
  const double hn = norm_sq(h);
  const double expected = (1.0 + 4.0) * 10.0 / hn + 4.0 / hn;
  CHECK(sol.total == Catch::Approx(expected).epsilon(1e-9));
  CHECK(std::abs(std::abs(hdot(sol.beam.w, h)) / norm(h) - 1.0) < 1e-9);
}

TEST_CASE("orthogonal weak channel with zero weak target") {
  const Cluster c({Complex{1.0, 0.0}, Complex{0.0, 0.0}},
                  {Complex{0.0, 0.0}, Complex{1.0, 0.0}}, 5.0, 0.0, 1.0);
  const ClusterSolution sol = optimize_beam(c);
  CHECK(std::abs(std::abs(sol.beam.w[0]) - 1.0) < 1e-9);
  CHECK(sol.total == Catch::Approx(5.0).epsilon(1e-9));
  CHECK(sol.p2 == 0.0);
}

TEST_CASE("optimizer dominates both matched-filter baselines") {
  std::mt19937_64 eng(8086);
  for (int trial = 0; trial < 25; ++trial) {
    const Cluster c = random_cluster(eng, 4, 10.0, 3.981);
    const ClusterSolution sol = optimize_beam(c);
    CHECK(constraints_satisfied(c, sol.beam, sol.p1, sol.p2, 1e-9));
    const auto baseline = [&](const ComplexVector& dir) {
      ComplexVector w = dir;
      const double n = norm(w);
      for (auto& e : w) e /= n;
      return test_oracles::cluster_total_for_beam(c, w);
    };
    CHECK(sol.total <= baseline(c.h1) * (1.0 + 1e-6));
    const double via_weak = baseline(c.h2);
    if (std::isfinite(via_weak)) {
      CHECK(sol.total <= via_weak * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("totals are invariant under per-channel phase rotation") {
  std::mt19937_64 eng(1234);
  const Cluster c = random_cluster(eng, 4, 10.0, 3.981);
  const Cluster rotated(scaled(c.h1, std::polar(1.0, 0.7)),
                        scaled(c.h2, std::polar(1.0, 2.1)), c.g1, c.g2, c.noise);

  // for a fixed beam the gains and powers are unchanged outright
  const Beam w = Beam::normalized(ComplexVector(c.h1));
  const ClusterSolution fixed_a = powers_for_beam(c, w);
  const ClusterSolution fixed_b = powers_for_beam(rotated, w);
  CHECK(fixed_b.p1 == Catch::Approx(fixed_a.p1).epsilon(1e-12));
  CHECK(fixed_b.p2 == Catch::Approx(fixed_a.p2).epsilon(1e-12));
  CHECK(sinr_weak(rotated, w, 0.3, 2.0) ==
        Catch::Approx(sinr_weak(c, w, 0.3, 2.0)).epsilon(1e-12));

  // the optimizer reaches the same minimum; the power split wobbles with
  // the angular tolerance of the search, the total does not
  const ClusterSolution a = optimize_beam(c);
  const ClusterSolution b = optimize_beam(rotated);
  CHECK(b.total == Catch::Approx(a.total).epsilon(1e-9));
  CHECK(b.p1 == Catch::Approx(a.p1).epsilon(1e-6));
  CHECK(b.p2 == Catch::Approx(a.p2).epsilon(1e-6));
}

TEST_CASE("subspace search matches full-space brute force at L = 3") {
  std::mt19937_64 eng(90210);
  for (int trial = 0; trial < 10; ++trial) {
    const Cluster c = random_cluster(eng, 3, 10.0, 3.981);
    const double sub = optimize_beam(c).total;
    const double full = test_oracles::full_space_min_total_l3(c);
    CHECK(std::abs(sub - full) <= 1e-6 * full);
  }
}

TEST_CASE("more antennas never cost more power") {
  std::mt19937_64 eng(24601);
  const ComplexVector h1 = random_channel(eng, 6, 1.5);
  const ComplexVector h2 = random_channel(eng, 6, 1.0);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t len = 2; len <= 6; ++len) {
    ComplexVector a(h1.begin(), h1.begin() + static_cast<long>(len));
    ComplexVector b(h2.begin(), h2.begin() + static_cast<long>(len));
    if (norm_sq(a) < norm_sq(b)) std::swap(a, b);
    const double total = optimize_beam(Cluster(a, b, 10.0, 3.981, 1.0)).total;
    CHECK(total <= previous * (1.0 + 1e-9));
    previous = total;
  }
}

TEST_CASE("single-cluster ZF reduces to the plain optimizer") {
  std::mt19937_64 eng(55);
  const Cluster c = random_cluster(eng, 4, 10.0, 3.981);
  const ClusterSolution direct = optimize_beam(c);
  const auto zf = zf_multicluster({c});
  REQUIRE(zf.size() == 1);
  CHECK(zf[0].total == Catch::Approx(direct.total).epsilon(1e-9));
}

TEST_CASE("two-cluster ZF nulls every cross channel") {
  std::mt19937_64 eng(2718);
  std::vector<Cluster> clusters;
  clusters.push_back(random_cluster(eng, 8, 10.0, 3.981));
  clusters.push_back(random_cluster(eng, 8, 10.0, 3.981));
  const auto sols = zf_multicluster(clusters);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const std::size_t other = 1 - i;
    for (const ComplexVector* h : {&clusters[other].h1, &clusters[other].h2}) {
      const double leakage = std::norm(hdot(*h, sols[i].beam.w));
      CHECK(leakage <= 1e-18 * norm_sq(*h));
    }
    CHECK(constraints_satisfied(clusters[i], sols[i].beam, sols[i].p1,
                                sols[i].p2, 1e-9));
  }
}

TEST_CASE("hand-built orthogonal clusters keep their isolated solutions") {
  // three clusters on three orthogonal directions of C^4; nulling the
  // others is free, so the ZF solution equals the isolated one
  std::vector<Cluster> clusters;
  for (std::size_t c = 0; c < 3; ++c) {
    ComplexVector strong(4, Complex{0.0, 0.0});
    strong[c] = Complex{2.0, 0.0};
    ComplexVector weak(4, Complex{0.0, 0.0});
    weak[c] = Complex{1.0, 0.0};
    clusters.emplace_back(std::move(strong), std::move(weak), 10.0, 3.981, 1.0);
  }
  const auto zf = zf_multicluster(clusters);
  for (std::size_t c = 0; c < 3; ++c) {
    const ClusterSolution isolated = optimize_beam(clusters[c]);
    CHECK(zf[c].total == Catch::Approx(isolated.total).epsilon(1e-12));
    CHECK(zf[c].p1 == Catch::Approx(isolated.p1).epsilon(1e-12));
    CHECK(zf[c].p2 == Catch::Approx(isolated.p2).epsilon(1e-12));
  }
}

TEST_CASE("too few antennas for the null set is infeasible") {
  std::mt19937_64 eng(13);
  std::vector<Cluster> clusters;
  for (int c = 0; c < 3; ++c) {
    clusters.push_back(random_cluster(eng, 4, 10.0, 3.981));
  }
  // three independent rank-2 clusters need L >= 5 to null 4 channels
  CHECK_THROWS_AS(zf_multicluster(clusters), InfeasibleError);
}

TEST_CASE("experiment rows are deterministic and NOMA beats OMA") {
  FadingSpec spec;
  spec.antenna_count = 1;
  spec.user_distances = {0.5, 1.0, 0.5, 1.0, 0.5, 1.0};
  spec.path_loss_exponent = 2.0;
  spec.seed = 99;
  const auto rows1 = fig3_experiment({4, 6}, 20, spec, 10.0, 3.981);
  const auto rows2 = fig3_experiment({4, 6}, 20, spec, 10.0, 3.981);
  REQUIRE(rows1.size() == 2);
  for (std::size_t i = 0; i < rows1.size(); ++i) {
    CHECK(rows1[i].noma_mean_power == rows2[i].noma_mean_power);
    CHECK(rows1[i].oma_mean_power == rows2[i].oma_mean_power);
    CHECK(rows1[i].noma_mean_power <= rows1[i].oma_mean_power);
    CHECK(rows1[i].infeasible_rate == 0.0);
  }
  CHECK(rows1[1].noma_mean_power < rows1[0].noma_mean_power);
}

TEST_CASE("K1 unsatisfiable everywhere is reported as infeasible") {
  // the weak user dominates the strong one in every direction
  const ComplexVector h1{Complex{1.0, 0.0}, Complex{0.5, 0.5}};
  const Cluster c(h1, scaled(h1, Complex{2.0, 0.0}), 10.0, 3.981, 1.0);
  CHECK_THROWS_AS(optimize_beam(c), InfeasibleError);
}

TEST_CASE("a binding K1 still yields a feasible beam") {
  // h2 beats h1 along h1's own direction, so the search must move off
  // the matched filter to satisfy K1
  const Cluster c({Complex{1.0, 0.0}, Complex{0.0, 0.0}},
                  {Complex{1.5, 0.0}, Complex{1.0, 0.0}}, 10.0, 3.981, 1.0);
  const ClusterSolution sol = optimize_beam(c);
  CHECK(constraints_satisfied(c, sol.beam, sol.p1, sol.p2, 1e-9));
  const double gain1 = std::norm(hdot(c.h1, sol.beam.w));
  const double gain2 = std::norm(hdot(c.h2, sol.beam.w));
  CHECK(gain1 >= gain2 * (1.0 - 1e-12));
}

TEST_CASE("beam constructor enforces unit norm") {
  CHECK_THROWS_AS(Beam({Complex{2.0, 0.0}}), std::invalid_argument);
  CHECK_NOTHROW(Beam::normalized({Complex{3.0, 4.0}}));
  CHECK_THROWS_AS(Beam::normalized({Complex{0.0, 0.0}}), std::invalid_argument);
}
