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

#include "annroute/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace annroute {

SearchMode search_mode_from_string(std::string_view name) {
  if (name == "baseline") return SearchMode::Baseline;
  if (name == "crouting") return SearchMode::CRouting;
  if (name == "crouting_o") return SearchMode::CRoutingO;
  if (name == "triangle") return SearchMode::Triangle;
  throw std::invalid_argument("unknown search mode: " + std::string(name));
}

std::string_view to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::Baseline: return "baseline";
    case SearchMode::CRouting: return "crouting";
    case SearchMode::CRoutingO: return "crouting_o";
    case SearchMode::Triangle: return "triangle";
  }
  throw std::invalid_argument("unknown search mode enum value");
}

bool mode_uses_pruning(SearchMode mode) {
  return mode != SearchMode::Baseline;
}

bool mode_needs_theta(SearchMode mode) {
  return mode == SearchMode::CRouting || mode == SearchMode::CRoutingO;
}

double appx_dist(double a, double b, double cos_theta) {
  double sq = a * a + b * b - 2.0 * a * b * cos_theta;
  return std::sqrt(sq > 0.0 ? sq : 0.0);
}

namespace {

struct DistId {
  double dist = 0.0;
  VectorId id = 0;
  bool operator<(const DistId& o) const {
    return dist < o.dist || (dist == o.dist && id < o.id);
  }
  bool operator>(const DistId& o) const { return o < *this; }
};

void validate_params(const SearchParams& params) {
  if (params.k < 1) throw std::invalid_argument("search needs k >= 1");
  if (params.k > params.efs) {
    throw std::invalid_argument("search needs k <= efs");
  }
  if (mode_needs_theta(params.mode) &&
      (params.theta < 0.0 || params.theta > std::numbers::pi)) {
    throw std::invalid_argument("theta must lie in [0, pi]");
  }
}

}  // namespace

SearchContext::SearchContext(const HnswIndex& index, const VectorStore& store)
    : index_(index), store_(store) {
  visit_epoch_.assign(index.size(), 0);
  prune_epoch_.assign(index.size(), 0);
}

QueryResult SearchContext::search(std::span<const float> query,
                                  const SearchParams& params,
                                  const SearchHooks* hooks) {
  if (index_.size() == 0) {
    throw std::invalid_argument("search over an empty index");
  }
  if (query.size() != store_.dim) {
    throw std::invalid_argument("query dimension mismatch");
  }
  validate_params(params);

  auto t_start = std::chrono::steady_clock::now();

  if (++epoch_ == 0) {
    std::fill(visit_epoch_.begin(), visit_epoch_.end(), 0);
    std::fill(prune_epoch_.begin(), prune_epoch_.end(), 0);
    epoch_ = 1;
  }
  const std::uint32_t epoch = epoch_;
  auto visited = [&](VectorId v) { return visit_epoch_[v] == epoch; };
  auto mark_visited = [&](VectorId v) { visit_epoch_[v] = epoch; };
  auto prune_marked = [&](VectorId v) { return prune_epoch_[v] == epoch; };
  auto mark_pruned = [&](VectorId v) { prune_epoch_[v] = epoch; };

  DistanceCounter counter;
  SearchStats stats;
  const Metric metric = index_.metric;
  const double q_norm =
      metric == Metric::Euclidean ? -1.0 : vector_norm(query);
  auto exact = [&](VectorId v) {
    return distance(store_, v, query, metric, counter, q_norm);
  };

  // Upper-layer descent: width-1 greedy walk from the entry point.
  VectorId cur = index_.entry_point;
  double cur_dist = exact(cur);
  for (std::int32_t level = index_.max_level; level > 0; --level) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (VectorId v : index_.upper[cur][level - 1]) {
        double d = exact(v);
        if (d < cur_dist) {
          cur_dist = d;
          cur = v;
          changed = true;
        }
      }
    }
  }

  // Base-layer beam search.
  const bool pruning = mode_uses_pruning(params.mode);
  const bool correction = params.mode == SearchMode::CRouting;
  const bool triangle = params.mode == SearchMode::Triangle;
  const double cos_theta = std::cos(params.theta);

  std::priority_queue<DistId, std::vector<DistId>, std::greater<DistId>>
      candidates;
  std::priority_queue<DistId> top;  // bounded at efs; top() = farthest
  candidates.push({cur_dist, cur});
  top.push({cur_dist, cur});
  mark_visited(cur);
  double upper_bound = cur_dist;
  if (hooks && hooks->on_upper_bound) {
    hooks->on_upper_bound(upper_bound, top.size() >= params.efs);
  }

  while (!candidates.empty()) {
    DistId c = candidates.top();
    if (c.dist > upper_bound) break;
    candidates.pop();

    for (const LayerEdge& edge : index_.layer0[c.id]) {
      VectorId n = edge.id;
      if (visited(n)) continue;

      bool revisit = false;
      if (pruning && top.size() >= params.efs) {
        if (correction && prune_marked(n)) {
          // Error correction: a previously pruned node reached again gets
          // the exact distance, bypassing the estimator.
          revisit = true;
        } else {
          double a = c.dist;                         // dist(c,q), from queue
          double b = static_cast<double>(edge.dist); // cached dist(c,n)
          if (a > 0.0 && b > 0.0) {  // degenerate triangles go exact
            stats.prune_checks += 1;
            double est_sq;
            if (triangle) {
              double diff = a - b;
              est_sq = diff * diff;
            } else {
              est_sq = a * a + b * b - 2.0 * a * b * cos_theta;
              if (est_sq < 0.0) est_sq = 0.0;
            }
            bool prune = est_sq >= upper_bound * upper_bound;
            if (hooks && hooks->on_prune_check) {
              hooks->on_prune_check(n, std::sqrt(est_sq), upper_bound, prune);
            }
            if (prune) {
              stats.pruned += 1;
              if (correction) {
                mark_pruned(n);
              } else {
                mark_visited(n);  // crouting_o and triangle never revisit
              }
              continue;
            }
          }
        }
      }

      mark_visited(n);
      if (revisit) stats.revisits += 1;
      double d = exact(n);
      if (hooks && hooks->on_edge) {
        hooks->on_edge(c.dist, static_cast<double>(edge.dist), d);
      }
      if (d < upper_bound || top.size() < params.efs) {
        candidates.push({d, n});
        top.push({d, n});
        if (top.size() > params.efs) top.pop();
        upper_bound = top.top().dist;
        if (hooks && hooks->on_upper_bound) {
          hooks->on_upper_bound(upper_bound, top.size() >= params.efs);
        }
      }
    }
  }

  QueryResult result;
  result.neighbors.reserve(top.size());
  while (!top.empty()) {
    result.neighbors.push_back({top.top().id, top.top().dist});
    top.pop();
  }
  std::reverse(result.neighbors.begin(), result.neighbors.end());
  if (result.neighbors.size() > params.k) result.neighbors.resize(params.k);

  stats.hops = counter.exact_calls;
  stats.elapsed_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  result.stats = stats;
  return result;
}

QueryResult greedy_search(const HnswIndex& index, const VectorStore& store,
                          std::span<const float> query, SearchParams params,
                          const SearchHooks* hooks) {
  params.mode = SearchMode::Baseline;
  SearchContext ctx(index, store);
  return ctx.search(query, params, hooks);
}

QueryResult crouting_search(const HnswIndex& index, const VectorStore& store,
                            std::span<const float> query, SearchParams params,
                            const SearchHooks* hooks) {
  if (!mode_uses_pruning(params.mode)) {
    throw std::invalid_argument(
        "crouting_search expects a pruning mode (crouting, crouting_o, "
        "triangle)");
  }
  SearchContext ctx(index, store);
  return ctx.search(query, params, hooks);
}

QueryResult knn_query(const HnswIndex& index, const VectorStore& store,
                      std::span<const float> query, std::uint32_t k,
                      std::uint32_t efs, SearchMode mode, double theta) {
  SearchParams params;
  params.k = k;
  params.efs = efs;
  params.mode = mode;
  params.theta = theta;
  switch (mode) {
    case SearchMode::Baseline:
      return greedy_search(index, store, query, params);
    case SearchMode::CRouting:
    case SearchMode::CRoutingO:
    case SearchMode::Triangle:
      return crouting_search(index, store, query, params);
  }
  throw std::invalid_argument("unknown search mode");
}

}  // namespace annroute
