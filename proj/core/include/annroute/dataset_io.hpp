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
#include <string>
#include <vector>

#include "annroute/vector_store.hpp"

namespace annroute {

/// Per-query exact k-nearest ids, sorted by true distance then ascending id.
struct GroundTruth {
  std::uint32_t k = 0;
  std::vector<std::vector<VectorId>> rows;
};

// TEXMEX-style length-prefixed binary vector files. Every record is a 4-byte
// little-endian signed dimension d followed by d elements: 4-byte float for
// fvecs, 1 unsigned byte (widened to float on load) for bvecs, 4-byte signed
// int for ivecs. All records in a file must share one d.
VectorStore read_fvecs(const std::string& path);
VectorStore read_bvecs(const std::string& path);
std::vector<std::vector<std::int32_t>> read_ivecs(const std::string& path);

void write_fvecs(const VectorStore& store, const std::string& path);
/// Values must be integral and within [0, 255] (the widened form bvecs
/// loading produces).
void write_bvecs(const VectorStore& store, const std::string& path);
void write_ivecs(const std::vector<std::vector<std::int32_t>>& rows,
                 const std::string& path);

/// Loads a vector file, dispatching on the .fvecs/.bvecs extension.
VectorStore read_vectors_auto(const std::string& path);

/// Deterministic store of n i.i.d. standard-normal d-vectors; the same
/// (n, d, seed) always reproduces identical bytes.
VectorStore synth_gaussian(std::size_t n, std::uint32_t d, std::uint64_t seed);

/// Exhaustive exact k-NN scan. Ties broken by ascending id. `threads` = 0
/// picks the hardware concurrency; the base store is only read, each worker
/// writes disjoint output rows.
GroundTruth brute_force_ground_truth(const VectorStore& base,
                                     const VectorStore& queries,
                                     std::uint32_t k, Metric metric,
                                     unsigned threads = 0);

void write_ground_truth(const GroundTruth& gt, const std::string& path);
GroundTruth read_ground_truth(const std::string& path);

}  // namespace annroute
