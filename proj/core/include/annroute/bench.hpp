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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annroute/dataset_io.hpp"
#include "annroute/hnsw_index.hpp"
#include "annroute/search.hpp"
#include "annroute/vector_store.hpp"

namespace annroute {

/// |top-k(result) ∩ top-k(truth)| / k, order-insensitive.
double recall_at_k(std::span<const VectorId> result,
                   std::span<const VectorId> truth, std::uint32_t k);

struct SweepRow {
  std::string mode;
  std::uint32_t efs = 0;
  std::uint32_t k = 0;
  double recall = 0.0;
  double qps = 0.0;
  std::uint64_t hops_total = 0;
  double speedup = 1.0;  // baseline hops at this efs / this mode's hops
  std::optional<double> avg_rel_err;            // pruning modes only
  std::optional<double> incorrect_prune_ratio;  // pruning modes only
};

struct SweepConfig {
  std::vector<std::uint32_t> efs_list;
  std::vector<SearchMode> modes;
  double theta = 0.0;            // pruning angle for crouting modes
  std::uint32_t k = 10;
  std::uint32_t repetitions = 3; // timing passes; QPS is their median
  std::size_t min_error_events = 1000;
};

/// Runs every query single-threaded for each (mode, efs) pair: mean recall,
/// total hops, median-of-repetitions QPS, and hop speedup against baseline
/// at the matched efs. Pruning modes are additionally re-run with
/// observation hooks (uncounted exact recomputations) until at least
/// min_error_events estimator events are seen, yielding the mean relative
/// estimation error and the incorrect-prune ratio.
std::vector<SweepRow> run_sweep(const HnswIndex& index,
                                const VectorStore& base,
                                const VectorStore& queries,
                                const GroundTruth& gt,
                                const SweepConfig& config);

/// Header: mode,efs,k,recall,qps,hops_total,speedup,avg_rel_err,
/// incorrect_prune_ratio. Fixed formatting so reruns with equal seeds differ
/// only in the qps column.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path);

}  // namespace annroute
