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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace annroute {

/// Histogram over [0, pi] of angles observed at the current search node
/// between the query direction and a neighbor edge. The percentile lookup
/// selects the pruning angle.
struct AngleProfile {
  static constexpr std::uint32_t kBins = 1024;

  std::uint32_t d = 0;          // dimensionality the profile was measured on
  std::uint64_t n_sample = 0;   // pseudo-queries used
  std::uint64_t total = 0;      // recorded angles
  std::vector<std::uint64_t> bins = std::vector<std::uint64_t>(kBins, 0);

  void record(double theta_rad);
  void merge(const AngleProfile& other);

  double mean() const;
  double stddev() const;
};

/// Smallest bin upper edge whose cumulative count reaches p percent of the
/// total. p in [0, 100]; throws on an empty profile.
double percentile(const AngleProfile& profile, double p);

/// Angle at the vertex joining sides a and b of a triangle with opposite
/// side c, via the cosine law; the arccos argument is clamped to [-1, 1].
double angle_from_sides(double a, double b, double c);

/// Density of the angle between two uniformly random directions in R^d:
/// Gamma(d/2) / (Gamma((d-1)/2) * sqrt(pi)) * sin^(d-2)(eta). Evaluated
/// through log-gamma so large d stays finite. Requires d >= 2.
double analytic_density(double eta, int d);

/// CDF of analytic_density on [0, eta], composite-Simpson quadrature.
double analytic_cdf(double eta, int d, int panels = 2048);

// Binary profile section used inside index files.
void write_profile(std::ostream& out, const AngleProfile& profile);
AngleProfile read_profile(std::istream& in);

/// CSV dump: bin_low_rad,bin_high_rad,count.
void write_profile_csv(const AngleProfile& profile, const std::string& path);

}  // namespace annroute
