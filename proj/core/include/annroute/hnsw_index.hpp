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
#include <optional>
#include <string>
#include <vector>

#include "annroute/angle_profile.hpp"
#include "annroute/vector_store.hpp"

namespace annroute {

/// Base-layer edge: neighbor id plus the exact edge length computed during
/// construction and kept in memory instead of being discarded.
struct LayerEdge {
  VectorId id = 0;
  float dist = 0.0f;
};

/// Layered small-world graph. Layer 0 holds every node with degree cap 2M
/// and cached edge lengths; upper layers cap at M and store plain id lists
/// (the descent through them is a width-1 greedy walk, so cached lengths
/// would buy nothing there).
struct HnswIndex {
  std::uint32_t dim = 0;
  std::uint32_t M = 32;
  std::uint32_t efc = 256;
  Metric metric = Metric::Euclidean;
  std::uint64_t rng_seed = 0;
  VectorId entry_point = 0;
  std::int32_t max_level = 0;
  std::vector<std::int32_t> levels;                       // per node
  std::vector<std::vector<LayerEdge>> layer0;             // per node
  std::vector<std::vector<std::vector<VectorId>>> upper;  // per node, level-1
  std::optional<AngleProfile> profile;

  std::size_t size() const { return levels.size(); }
  std::uint32_t max_degree(std::int32_t level) const {
    return level == 0 ? 2 * M : M;
  }
  /// Directed layer-0 edge count (each cached length is one float).
  std::size_t edge_count() const;
};

/// Sequential insertion build. Level draws use multiplier 1/ln(M); each
/// layer at or below the node's level runs an efc-wide beam search, neighbor
/// selection keeps candidates closer to the new node than to any already
/// selected one, and reverse edges are re-selected when a cap overflows.
/// The same (store, M, efc, metric, seed) reproduces an identical index.
HnswIndex hnsw_build(const VectorStore& store, std::uint32_t M,
                     std::uint32_t efc, Metric metric, std::uint64_t seed);

/// Layer-0 adjacency of c with cached distances, insertion order.
const std::vector<LayerEdge>& neighbors_with_dists(const HnswIndex& index,
                                                   VectorId c);

// Versioned binary snapshot. Header carries magic, version, dim, count, M,
// efc, metric, seed; then per-node levels, adjacency with cached layer-0
// distances, and an optional angle-profile section.
void save_index(const HnswIndex& index, const std::string& path);
HnswIndex load_index(const std::string& path, const VectorStore& store);

/// Header fields plus the optional profile, readable without the store.
struct IndexSummary {
  std::uint32_t version = 0;
  std::uint32_t dim = 0;
  std::uint64_t count = 0;
  std::uint32_t M = 0;
  std::uint32_t efc = 0;
  Metric metric = Metric::Euclidean;
  std::uint64_t rng_seed = 0;
  std::optional<AngleProfile> profile;
};
IndexSummary read_index_summary(const std::string& path);

}  // namespace annroute
