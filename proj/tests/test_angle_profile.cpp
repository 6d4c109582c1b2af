// Copyright 2026-present the annroute project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "annroute/angle_profile.hpp"
#include "annroute/angle_sampler.hpp"
#include "annroute/search.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace annroute;
namespace helpers = annroute::testing;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kBinWidth = kPi / AngleProfile::kBins;

// test-local quadrature oracle: composite trapezoid on a fine grid,
// independent of the library's Simpson-based CDF
double trapezoid_integral(int d, int points) {
  double h = kPi / points;
  double sum = 0.5 * (analytic_density(0.0, d) + analytic_density(kPi, d));
  for (int i = 1; i < points; ++i) sum += analytic_density(i * h, d);
  return sum * h;
}
}  // namespace

TEST_CASE("equilateral triple records the 60-degree angle") {
  CHECK(angle_from_sides(1.0, 1.0, 1.0) == doctest::Approx(kPi / 3));
  AngleProfile profile;
  profile.record(angle_from_sides(2.5, 2.5, 2.5));
  CHECK(profile.total == 1);
  auto bin = static_cast<std::size_t>((kPi / 3) / kBinWidth);
  CHECK(profile.bins[bin] == 1);
}

TEST_CASE("angle_from_sides clamps degenerate cosines") {
  CHECK(angle_from_sides(1.0, 1.0, 2.0) == doctest::Approx(kPi));
  CHECK(angle_from_sides(1.0, 1.0, 0.0) == doctest::Approx(0.0));
  CHECK(angle_from_sides(3.0, 4.0, 5.0) == doctest::Approx(kPi / 2));
}

TEST_CASE("percentile on uniform counts sits at the mass fraction") {
  AngleProfile profile;
  for (auto& b : profile.bins) b = 1;
  profile.total = AngleProfile::kBins;
  CHECK(std::fabs(percentile(profile, 50.0) - kPi / 2) <= kBinWidth);
  CHECK(percentile(profile, 100.0) == doctest::Approx(kPi));
}

TEST_CASE("percentile(100) lands on the largest recorded angle's bin edge") {
  AngleProfile profile;
  profile.record(0.5);
  profile.record(1.25);
  profile.record(0.75);
  double expected_edge =
      (std::floor(1.25 / kBinWidth) + 1.0) * kBinWidth;
  CHECK(percentile(profile, 100.0) == doctest::Approx(expected_edge));
}

TEST_CASE("percentile rejects empty profiles and bad p") {
  AngleProfile profile;
  CHECK_THROWS_AS(percentile(profile, 90.0), std::invalid_argument);
  profile.record(1.0);
  CHECK_THROWS_AS(percentile(profile, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(percentile(profile, 101.0), std::invalid_argument);
}

TEST_CASE("profile percentile matches the sorted-sample oracle") {
  const auto& f = helpers::d128_fixture();
  const std::size_t n_sample = 5;
  const std::uint64_t seed = 606;
  AngleProfile profile = sample_angles(f.index, f.store, n_sample, seed);
  REQUIRE(profile.total > 1000);

  // independent collection: same seeded pseudo-queries, raw angles kept
  std::vector<double> raw;
  SearchHooks hooks;
  hooks.on_edge = [&raw](double a, double b, double c) {
    if (a > 1e-9 && b > 1e-9 && c > 1e-9) {
      raw.push_back(angle_from_sides(a, b, c));
    }
  };
  SearchParams params;
  params.mode = SearchMode::Baseline;
  params.efs = 100;
  params.k = 1;
  SearchContext ctx(f.index, f.store);
  for (VectorId id : sample_base_queries(f.store, n_sample, seed)) {
    ctx.search(f.store.at(id), params, &hooks);
  }
  REQUIRE(raw.size() == profile.total);

  std::sort(raw.begin(), raw.end());
  auto rank = static_cast<std::size_t>(
      std::ceil(0.90 * static_cast<double>(raw.size()))) - 1;
  double oracle = raw[rank];
  CHECK(std::fabs(percentile(profile, 90.0) - oracle) <= kBinWidth + 1e-12);
}

TEST_CASE("profiles from disjoint seeds agree at the 90th percentile") {
  const auto& f = helpers::small_gaussian_fixture();
  AngleProfile a = sample_angles(f.index, f.store, 10, 1);
  AngleProfile b = sample_angles(f.index, f.store, 10, 99991);
  CHECK(std::fabs(percentile(a, 90.0) - percentile(b, 90.0)) <= 0.05);
}

TEST_CASE("default sample count is a tenth of a percent, rounded up") {
  CHECK(default_sample_count(20000) == 20);
  CHECK(default_sample_count(50000) == 50);
  CHECK(default_sample_count(999) == 1);
  CHECK(default_sample_count(1001) == 2);
  CHECK(default_sample_count(0) == 1);
}

TEST_CASE("sample_angles validates inputs") {
  const auto& f = helpers::small_gaussian_fixture();
  CHECK_THROWS_AS(sample_angles(f.index, f.store, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("analytic density closed-form spot values") {
  CHECK(analytic_density(kPi / 2, 2) == doctest::Approx(1.0 / kPi));
  CHECK(analytic_density(0.0, 3) == doctest::Approx(0.0));
  CHECK(analytic_density(kPi, 3) == doctest::Approx(0.0));
  CHECK_THROWS_AS(analytic_density(1.0, 1), std::invalid_argument);
}

TEST_CASE("analytic density integrates to one") {
  for (int d : {2, 128, 960}) {
    CHECK(std::fabs(trapezoid_integral(d, 1 << 17) - 1.0) <= 1e-6);
    CHECK(std::fabs(analytic_cdf(kPi, d) - 1.0) <= 1e-6);
  }
}

TEST_CASE("analytic density is symmetric about pi/2") {
  for (int d : {2, 3, 64, 500}) {
    for (double x : {0.1, 0.4, 0.9, 1.3}) {
      CHECK(analytic_density(kPi / 2 + x, d) ==
            doctest::Approx(analytic_density(kPi / 2 - x, d)).epsilon(1e-9));
    }
  }
}

TEST_CASE("random pair angles of duplicate and opposite vectors") {
  VectorStore dup(3, {1.0f, 2.0f, 3.0f, 1.0f, 2.0f, 3.0f});
  AngleProfile zero = random_pair_angles(dup, 50, 5);
  CHECK(zero.total == 50);
  CHECK(zero.bins[0] == 50);

  VectorStore opp(3, {1.0f, 2.0f, 3.0f, -1.0f, -2.0f, -3.0f});
  AngleProfile pi_prof = random_pair_angles(opp, 50, 5);
  CHECK(pi_prof.total == 50);
  CHECK(pi_prof.bins[AngleProfile::kBins - 1] == 50);
}

TEST_CASE("gaussian pair angles concentrate near pi/2, tighter as d grows") {
  VectorStore d128 = synth_gaussian(4000, 128, 71);
  VectorStore d960 = synth_gaussian(2000, 960, 73);
  AngleProfile p128 = random_pair_angles(d128, 20000, 75);
  AngleProfile p960 = random_pair_angles(d960, 20000, 77);
  CHECK(std::fabs(p128.mean() - kPi / 2) <= 0.05);
  CHECK(std::fabs(p960.mean() - kPi / 2) <= 0.05);
  CHECK(p960.stddev() < p128.stddev());
}

TEST_CASE("random_pair_angles needs at least two vectors") {
  VectorStore one(4, {1.0f, 0.0f, 0.0f, 0.0f});
  CHECK_THROWS_AS(random_pair_angles(one, 10, 1), std::invalid_argument);
}

TEST_CASE("profile stream serialization round-trips") {
  AngleProfile profile;
  profile.d = 48;
  profile.n_sample = 12;
  for (int i = 0; i < 500; ++i) profile.record(0.003 * i);
  std::stringstream ss;
  write_profile(ss, profile);
  AngleProfile back = read_profile(ss);
  CHECK(back.d == profile.d);
  CHECK(back.n_sample == profile.n_sample);
  CHECK(back.total == profile.total);
  CHECK(back.bins == profile.bins);
}

TEST_CASE("percentile is non-decreasing in p and stays inside [0, pi]") {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  AngleProfile profile;
  for (int i = 0; i < 5000; ++i) profile.record(angle(rng));
  CHECK(profile.total == 5000);
  std::uint64_t bin_sum = 0;
  for (auto b : profile.bins) bin_sum += b;
  CHECK(bin_sum == profile.total);
  double prev = 0.0;
  for (double p = 0.0; p <= 100.0; p += 0.5) {
    double v = percentile(profile, p);
    CHECK(v >= prev);
    CHECK(v >= 0.0);
    CHECK(v <= kPi);
    prev = v;
  }
}

TEST_CASE("profile merge adds bins") {
  AngleProfile a;
  a.record(0.5);
  AngleProfile b;
  b.record(0.5);
  b.record(2.5);
  a.merge(b);
  CHECK(a.total == 3);
  auto bin = static_cast<std::size_t>(0.5 / kBinWidth);
  CHECK(a.bins[bin] == 2);
}

TEST_CASE("profile csv dump has one row per bin") {
  AngleProfile profile;
  profile.record(1.0);
  profile.record(1.0);
  auto dir = helpers::unique_tmp_dir("profile_csv");
  auto path = dir / "profile.csv";
  write_profile_csv(profile, path.string());
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "bin_low_rad,bin_high_rad,count");
  std::size_t rows = 0;
  std::uint64_t count_sum = 0;
  while (std::getline(in, line)) {
    ++rows;
    count_sum += std::stoull(line.substr(line.rfind(',') + 1));
  }
  CHECK(rows == AngleProfile::kBins);
  CHECK(count_sum == profile.total);
  std::filesystem::remove_all(dir);
}
