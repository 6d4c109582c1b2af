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
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "annroute/hnsw_index.hpp"
#include "annroute/vector_store.hpp"

namespace annroute {

enum class SearchMode {
  Baseline,   // plain greedy beam search
  CRouting,   // cosine-law pruning with revisit-based error correction
  CRoutingO,  // pruning only; a pruned node is never reconsidered
  Triangle,   // |dist(c,n) - dist(c,q)| lower-bound pruning, no correction
};

SearchMode search_mode_from_string(std::string_view name);
std::string_view to_string(SearchMode mode);
bool mode_uses_pruning(SearchMode mode);
bool mode_needs_theta(SearchMode mode);

struct SearchParams {
  std::uint32_t efs = 100;  // top-results queue capacity
  std::uint32_t k = 10;     // results returned, k <= efs
  SearchMode mode = SearchMode::Baseline;
  double theta = 0.0;       // pruning angle in radians (crouting modes)
};

struct SearchStats {
  std::uint64_t hops = 0;          // exact distance calls
  std::uint64_t prune_checks = 0;  // estimator evaluations
  std::uint64_t pruned = 0;        // nodes skipped by the estimator
  std::uint64_t revisits = 0;      // pruned marks overridden by exact calls
  double elapsed_sec = 0.0;
};

struct ResultEntry {
  VectorId id = 0;
  double dist = 0.0;
};

struct QueryResult {
  std::vector<ResultEntry> neighbors;  // ascending (dist, id)
  SearchStats stats;
};

/// Observation hooks for tests and instrumentation. Firing them never
/// changes traversal, results, or counters.
struct SearchHooks {
  /// Base-layer expansion that computed an exact distance: sides
  /// dist(c,q), cached dist(c,n), and fresh dist(n,q).
  std::function<void(double dist_cq, double dist_cn, double dist_nq)> on_edge;
  /// Upper bound after a top-results update; queue_full once |T| = efs.
  std::function<void(double upper_bound, bool queue_full)> on_upper_bound;
  /// Estimator evaluation for neighbor n; `pruned` tells whether it fired.
  std::function<void(VectorId n, double approx, double upper_bound,
                     bool pruned)>
      on_prune_check;
};

/// Cosine-law estimate of the side opposite the angle between sides a and b:
/// sqrt(max(0, a^2 + b^2 - 2ab*cos_theta)). Pure math; call sites account
/// for prune_checks.
double appx_dist(double a, double b, double cos_theta);

/// Reusable per-thread search state: epoch-stamped visited/pruned marks and
/// scratch queues, so a query costs O(1) setup instead of O(N) clearing.
/// One context serves many sequential queries over one immutable index;
/// concurrent searches need one context each.
class SearchContext {
 public:
  SearchContext(const HnswIndex& index, const VectorStore& store);

  QueryResult search(std::span<const float> query, const SearchParams& params,
                     const SearchHooks* hooks = nullptr);

 private:
  const HnswIndex& index_;
  const VectorStore& store_;
  std::vector<std::uint32_t> visit_epoch_;
  std::vector<std::uint32_t> prune_epoch_;
  std::uint32_t epoch_ = 0;
};

// One-shot wrappers around SearchContext for the individual strategies.
QueryResult greedy_search(const HnswIndex& index, const VectorStore& store,
                          std::span<const float> query, SearchParams params,
                          const SearchHooks* hooks = nullptr);
QueryResult crouting_search(const HnswIndex& index, const VectorStore& store,
                            std::span<const float> query, SearchParams params,
                            const SearchHooks* hooks = nullptr);
QueryResult knn_query(const HnswIndex& index, const VectorStore& store,
                      std::span<const float> query, std::uint32_t k,
                      std::uint32_t efs, SearchMode mode, double theta = 0.0);

}  // namespace annroute
