#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "noma/channel.hpp"

using namespace noma;

namespace {

// Sample E|h_i|^2 over many draws of entry 0.
double sample_entry_variance(const FadingSpec& base, std::size_t user, int draws) {
  double acc = 0.0;
  FadingSpec spec = base;
  for (int i = 0; i < draws; ++i) {
    spec.seed = derive_seed(base.seed, 1000003ULL + static_cast<std::uint64_t>(i));
    const ComplexVector h = draw_channel(spec, user);
    acc += std::norm(h[0]);
  }
  return acc / draws;
}

}  // namespace

TEST_CASE("unit-distance draws have unit per-entry variance") {
  FadingSpec spec;
  spec.antenna_count = 2;
  spec.user_distances = {1.0};
  spec.path_loss_exponent = 0.0;
  spec.seed = 7;
  const double v = sample_entry_variance(spec, 0, 100000);
  CHECK(std::abs(v - 1.0) < 0.02);
}

TEST_CASE("distance scaling follows the path-loss law") {
  FadingSpec spec;
  spec.antenna_count = 1;
  spec.user_distances = {2.0};
  spec.path_loss_exponent = 2.0;
  spec.seed = 11;
  const double v = sample_entry_variance(spec, 0, 100000);
  CHECK(std::abs(v - 0.25) < 0.25 * 0.05);
}

TEST_CASE("scaling all distances by c scales variances by c^-ple") {
  FadingSpec spec;
  spec.antenna_count = 1;
  spec.user_distances = {1.5};
  spec.path_loss_exponent = 3.0;
  spec.seed = 13;
  FadingSpec scaled_spec = spec;
  scaled_spec.user_distances = {3.0};
  const double v1 = sample_entry_variance(spec, 0, 50000);
  const double v2 = sample_entry_variance(scaled_spec, 0, 50000);
  const double expected_ratio = std::pow(2.0, -3.0);
  CHECK(std::abs(v2 / v1 - expected_ratio) < expected_ratio * 0.05);
}

TEST_CASE("same (spec, index) draws are bitwise identical") {
  FadingSpec spec;
  spec.antenna_count = 8;
  spec.user_distances = {0.5, 1.0, 2.0};
  spec.path_loss_exponent = 2.0;
  spec.seed = 424242;
  const ComplexVector a = draw_channel(spec, 1);
  const ComplexVector b = draw_channel(spec, 1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].real() == b[i].real());
    CHECK(a[i].imag() == b[i].imag());
  }
  // distinct users and seeds give distinct streams
  const ComplexVector c = draw_channel(spec, 2);
  CHECK((a[0] != c[0]));
  FadingSpec other = spec;
  other.seed = 424243;
  CHECK((draw_channel(other, 1)[0] != a[0]));
}

TEST_CASE("out-of-range user index is rejected") {
  FadingSpec spec;
  spec.antenna_count = 2;
  spec.user_distances = {1.0, 2.0};
  spec.seed = 1;
  CHECK_THROWS_AS(draw_channel(spec, 2), std::out_of_range);
}

TEST_CASE("invalid specs are rejected") {
  FadingSpec spec;
  spec.antenna_count = 0;
  spec.user_distances = {1.0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.antenna_count = 1;
  spec.user_distances = {0.0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.user_distances = {1.0};
  spec.path_loss_exponent = -1.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("FadingSpec round-trips through JSON") {
  FadingSpec spec;
  spec.antenna_count = 4;
  spec.user_distances = {0.5, 1.25};
  spec.path_loss_exponent = 2.0;
  spec.seed = 0xDEADBEEFCAFEBABEULL;
  const nlohmann::json j = spec;
  const auto back = j.get<FadingSpec>();
  CHECK(back.antenna_count == spec.antenna_count);
  CHECK(back.user_distances == spec.user_distances);
  CHECK(back.path_loss_exponent == spec.path_loss_exponent);
  CHECK(back.seed == spec.seed);
  CHECK(j.at("antenna_count") == 4);
}
