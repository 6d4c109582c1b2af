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

#include "annroute/vector_store.hpp"

#include <cmath>
#include <stdexcept>

namespace annroute {

Metric metric_from_string(std::string_view name) {
  if (name == "euclidean" || name == "l2") return Metric::Euclidean;
  if (name == "inner_product" || name == "ip") return Metric::InnerProduct;
  if (name == "cosine") return Metric::Cosine;
  throw std::invalid_argument("unknown metric: " + std::string(name));
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Euclidean: return "euclidean";
    case Metric::InnerProduct: return "inner_product";
    case Metric::Cosine: return "cosine";
  }
  throw std::invalid_argument("unknown metric enum value");
}

VectorStore::VectorStore(std::uint32_t d, std::vector<float> values)
    : dim(d), data(std::move(values)) {
  if (dim == 0 && !data.empty()) {
    throw std::invalid_argument("vector store with data needs dim > 0");
  }
  if (dim != 0 && data.size() % dim != 0) {
    throw std::invalid_argument("vector store data size not a multiple of dim");
  }
}

void VectorStore::compute_norms() {
  norms.resize(count());
  for (std::size_t i = 0; i < count(); ++i) {
    norms[i] = static_cast<float>(vector_norm(at(static_cast<VectorId>(i))));
  }
}

void prepare_for_metric(VectorStore& store, Metric metric) {
  if (metric == Metric::Euclidean) return;
  if (!store.has_norms()) store.compute_norms();
  if (metric == Metric::Cosine) {
    for (std::size_t i = 0; i < store.count(); ++i) {
      if (std::fabs(store.norms[i] - 1.0f) > 1e-3f) {
        throw std::invalid_argument(
            "cosine metric requires pre-normalized vectors; vector " +
            std::to_string(i) + " has norm " + std::to_string(store.norms[i]));
      }
    }
  }
}

double vector_norm(std::span<const float> v) {
  double sum = 0.0;
  for (float x : v) {
    sum += static_cast<double>(x) * static_cast<double>(x);
  }
  return std::sqrt(sum);
}

double norm(const VectorStore& store, VectorId a) {
  if (store.has_norms()) return store.norms[a];
  return vector_norm(store.at(a));
}

double euclidean_from_ip(double norm_c, double norm_q, double ip_dist) {
  double sq = norm_c * norm_c + norm_q * norm_q + 2.0 * ip_dist - 2.0;
  return std::sqrt(sq > 0.0 ? sq : 0.0);
}

namespace {

// Sums accumulate in double even though elements are float: the angle math
// downstream feeds arccos, which is sensitive near its domain edges.
double l2_distance(const float* a, const float* b, std::size_t d) {
  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double dot_product(const float* a, const float* b, std::size_t d) {
  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

}  // namespace

double distance(const VectorStore& store, VectorId a, std::span<const float> q,
                Metric metric, DistanceCounter& counter, double q_norm) {
  if (q.size() != store.dim) {
    throw std::invalid_argument("query dimension mismatch: expected " +
                                std::to_string(store.dim) + ", got " +
                                std::to_string(q.size()));
  }
  counter.exact_calls += 1;
  const float* av = store.vec(a);
  switch (metric) {
    case Metric::Euclidean:
      return l2_distance(av, q.data(), store.dim);
    case Metric::InnerProduct:
    case Metric::Cosine: {
      double ip_dist = 1.0 - dot_product(av, q.data(), store.dim);
      double nc = norm(store, a);
      double nq = q_norm >= 0.0 ? q_norm : vector_norm(q);
      return euclidean_from_ip(nc, nq, ip_dist);
    }
  }
  throw std::invalid_argument("unknown metric enum value");
}

}  // namespace annroute
