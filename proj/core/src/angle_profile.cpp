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

#include "annroute/angle_profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace annroute {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kBinWidth = kPi / AngleProfile::kBins;
}  // namespace

void AngleProfile::record(double theta_rad) {
  double t = std::clamp(theta_rad, 0.0, kPi);
  auto bin = static_cast<std::size_t>(t / kBinWidth);
  if (bin >= kBins) bin = kBins - 1;
  bins[bin] += 1;
  total += 1;
}

void AngleProfile::merge(const AngleProfile& other) {
  for (std::size_t i = 0; i < bins.size(); ++i) bins[i] += other.bins[i];
  total += other.total;
  n_sample += other.n_sample;
}

double AngleProfile::mean() const {
  if (total == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    double center = (static_cast<double>(i) + 0.5) * kBinWidth;
    sum += center * static_cast<double>(bins[i]);
  }
  return sum / static_cast<double>(total);
}

double AngleProfile::stddev() const {
  if (total == 0) return 0.0;
  double mu = mean();
  double sum = 0.0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    double center = (static_cast<double>(i) + 0.5) * kBinWidth;
    sum += (center - mu) * (center - mu) * static_cast<double>(bins[i]);
  }
  return std::sqrt(sum / static_cast<double>(total));
}

double percentile(const AngleProfile& profile, double p) {
  if (profile.total == 0) {
    throw std::invalid_argument("percentile of an empty angle profile");
  }
  if (p < 0.0 || p > 100.0) {
    throw std::invalid_argument("percentile p must be in [0, 100]");
  }
  double target = p / 100.0 * static_cast<double>(profile.total);
  std::uint64_t cum = 0;
  for (std::size_t i = 0; i < profile.bins.size(); ++i) {
    cum += profile.bins[i];
    if (static_cast<double>(cum) >= target) {
      return (static_cast<double>(i) + 1.0) * kBinWidth;
    }
  }
  return kPi;
}

double angle_from_sides(double a, double b, double c) {
  double cos_theta = (a * a + b * b - c * c) / (2.0 * a * b);
  return std::acos(std::clamp(cos_theta, -1.0, 1.0));
}

double analytic_density(double eta, int d) {
  if (d < 2) throw std::invalid_argument("analytic_density needs d >= 2");
  if (eta < 0.0 || eta > kPi) return 0.0;
  double log_prefactor = std::lgamma(d / 2.0) - std::lgamma((d - 1) / 2.0) -
                         0.5 * std::log(kPi);
  if (d == 2) return std::exp(log_prefactor);
  double s = std::sin(eta);
  if (s <= 0.0) return 0.0;
  return std::exp(log_prefactor + (d - 2) * std::log(s));
}

double analytic_cdf(double eta, int d, int panels) {
  if (eta <= 0.0) return 0.0;
  if (eta > kPi) eta = kPi;
  if (panels % 2 != 0) panels += 1;  // Simpson wants an even panel count
  double h = eta / panels;
  double sum = analytic_density(0.0, d) + analytic_density(eta, d);
  for (int i = 1; i < panels; ++i) {
    sum += analytic_density(i * h, d) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

void write_profile(std::ostream& out, const AngleProfile& profile) {
  auto put = [&out](const auto& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
  };
  put(profile.d);
  put(profile.n_sample);
  put(profile.total);
  std::uint32_t n_bins = AngleProfile::kBins;
  put(n_bins);
  out.write(reinterpret_cast<const char*>(profile.bins.data()),
            static_cast<std::streamsize>(n_bins * sizeof(std::uint64_t)));
}

AngleProfile read_profile(std::istream& in) {
  AngleProfile profile;
  auto get = [&in](auto& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
  };
  get(profile.d);
  get(profile.n_sample);
  get(profile.total);
  std::uint32_t n_bins = 0;
  get(n_bins);
  if (!in || n_bins != AngleProfile::kBins) {
    throw std::runtime_error("corrupt angle profile section");
  }
  in.read(reinterpret_cast<char*>(profile.bins.data()),
          static_cast<std::streamsize>(n_bins * sizeof(std::uint64_t)));
  if (!in) throw std::runtime_error("truncated angle profile section");
  return profile;
}

void write_profile_csv(const AngleProfile& profile, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for write: " + path);
  out << "bin_low_rad,bin_high_rad,count\n";
  for (std::size_t i = 0; i < profile.bins.size(); ++i) {
    out << i * kBinWidth << ',' << (i + 1) * kBinWidth << ','
        << profile.bins[i] << '\n';
  }
}

}  // namespace annroute
