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

#include "annroute/angle_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "annroute/search.hpp"

namespace annroute {

namespace {
// Profiling searches run at a fixed efc-scale beam width; the recorded
// angles come from plain greedy traversal so the calibration is not biased
// by the pruning mechanism it later parameterizes.
constexpr std::uint32_t kProfileEfs = 100;
constexpr double kSideEpsilon = 1e-9;
}  // namespace

std::size_t default_sample_count(std::size_t store_count) {
  std::size_t n = (store_count + 999) / 1000;  // ceil(0.001 * N)
  return n == 0 ? 1 : n;
}

std::vector<VectorId> sample_base_queries(const VectorStore& store,
                                          std::size_t n, std::uint64_t seed) {
  if (store.empty()) {
    throw std::invalid_argument("cannot sample queries from an empty store");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VectorId> pick(
      0, static_cast<VectorId>(store.count() - 1));
  std::vector<VectorId> ids(n);
  for (auto& id : ids) id = pick(rng);
  return ids;
}

AngleProfile sample_angles(const HnswIndex& index, const VectorStore& store,
                           std::size_t n_sample, std::uint64_t seed) {
  if (n_sample < 1) {
    throw std::invalid_argument("sample_angles needs n_sample >= 1");
  }
  AngleProfile profile;
  profile.d = store.dim;
  profile.n_sample = n_sample;

  SearchHooks hooks;
  hooks.on_edge = [&profile](double a, double b, double c) {
    if (a > kSideEpsilon && b > kSideEpsilon && c > kSideEpsilon) {
      profile.record(angle_from_sides(a, b, c));
    }
  };

  SearchParams params;
  params.mode = SearchMode::Baseline;
  params.efs = kProfileEfs;
  params.k = 1;

  SearchContext ctx(index, store);
  for (VectorId id : sample_base_queries(store, n_sample, seed)) {
    ctx.search(store.at(id), params, &hooks);
  }
  return profile;
}

AngleProfile random_pair_angles(const VectorStore& store, std::size_t m_pairs,
                                std::uint64_t seed) {
  if (store.count() < 2) {
    throw std::invalid_argument("random_pair_angles needs at least 2 vectors");
  }
  AngleProfile profile;
  profile.d = store.dim;
  profile.n_sample = m_pairs;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VectorId> pick(
      0, static_cast<VectorId>(store.count() - 1));
  for (std::size_t i = 0; i < m_pairs; ++i) {
    VectorId a = pick(rng);
    VectorId b = pick(rng);
    while (b == a) b = pick(rng);
    double na = vector_norm(store.at(a));
    double nb = vector_norm(store.at(b));
    if (na <= kSideEpsilon || nb <= kSideEpsilon) continue;
    double dot = 0.0;
    const float* va = store.vec(a);
    const float* vb = store.vec(b);
    for (std::uint32_t j = 0; j < store.dim; ++j) {
      dot += static_cast<double>(va[j]) * static_cast<double>(vb[j]);
    }
    double cosv = dot / (na * nb);
    profile.record(std::acos(std::clamp(cosv, -1.0, 1.0)));
  }
  return profile;
}

}  // namespace annroute
