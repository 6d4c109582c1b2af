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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace annroute {

using VectorId = std::uint32_t;

enum class Metric : std::uint32_t {
  Euclidean = 0,
  InnerProduct = 1,
  Cosine = 2,
};

Metric metric_from_string(std::string_view name);
std::string_view to_string(Metric metric);

/// Counts exact (full d-component) distance evaluations. One counter per
/// query; estimator evaluations never touch it.
struct DistanceCounter {
  std::uint64_t exact_calls = 0;
};

/// Immutable-after-load collection of d-dimensional float vectors, stored
/// row-major. Norms are filled once via compute_norms() when the store is
/// prepared for inner-product or cosine use.
struct VectorStore {
  std::uint32_t dim = 0;
  std::vector<float> data;   // count() * dim floats
  std::vector<float> norms;  // empty until computed

  VectorStore() = default;
  VectorStore(std::uint32_t d, std::vector<float> values);

  std::size_t count() const { return dim == 0 ? 0 : data.size() / dim; }
  bool empty() const { return count() == 0; }
  bool has_norms() const { return !norms.empty(); }

  const float* vec(VectorId id) const {
    return data.data() + static_cast<std::size_t>(id) * dim;
  }
  std::span<const float> at(VectorId id) const { return {vec(id), dim}; }

  void compute_norms();
};

/// Computes norms if the metric needs them; for cosine additionally checks
/// that every vector is unit length within 1e-3.
void prepare_for_metric(VectorStore& store, Metric metric);

/// L2 norm accumulated in double.
double vector_norm(std::span<const float> v);

/// L2 norm of a stored vector, served from the cache when present.
double norm(const VectorStore& store, VectorId a);

/// Euclidean side length recovered from the inner-product distance
/// IPDist(c,q) = 1 - c.q:  sqrt(max(0, |c|^2 + |q|^2 + 2*IPDist - 2)).
double euclidean_from_ip(double norm_c, double norm_q, double ip_dist);

/// Exact metric distance between stored vector `a` and query `q`, counted.
/// Euclidean returns the non-squared L2 distance; inner_product and cosine
/// return the equivalent Euclidean side length via euclidean_from_ip, so one
/// geometry path serves all metrics. `q_norm` lets callers reuse a per-query
/// norm; pass a negative value to have it computed here.
double distance(const VectorStore& store, VectorId a, std::span<const float> q,
                Metric metric, DistanceCounter& counter, double q_norm = -1.0);

}  // namespace annroute
