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

#include "annroute/angle_profile.hpp"
#include "annroute/hnsw_index.hpp"
#include "annroute/vector_store.hpp"

namespace annroute {

/// Default pseudo-query budget: 0.1% of the node count, at least 1.
std::size_t default_sample_count(std::size_t store_count);

/// Seeded uniform draw of base-vector ids used as pseudo-queries.
std::vector<VectorId> sample_base_queries(const VectorStore& store,
                                          std::size_t n, std::uint64_t seed);

/// Runs plain greedy searches from n_sample sampled base vectors and records
/// the angle at the current node between the query and each expanded edge,
/// recovered from the three exact side lengths via the cosine law. Sides
/// shorter than 1e-9 (self-hits included) are skipped.
AngleProfile sample_angles(const HnswIndex& index, const VectorStore& store,
                           std::size_t n_sample, std::uint64_t seed);

/// Angles between seeded random vector pairs of the store; the empirical
/// counterpart of analytic_density.
AngleProfile random_pair_angles(const VectorStore& store, std::size_t m_pairs,
                                std::uint64_t seed);

}  // namespace annroute
