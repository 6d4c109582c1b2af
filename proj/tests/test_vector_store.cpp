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

#include <cmath>
#include <random>

#include "annroute/dataset_io.hpp"
#include "annroute/vector_store.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace annroute;
namespace helpers = annroute::testing;

TEST_CASE("euclidean distance on a 3-4-5 triangle") {
  VectorStore store(2, {0.0f, 0.0f});
  std::vector<float> q = {3.0f, 4.0f};
  DistanceCounter counter;
  CHECK(distance(store, 0, q, Metric::Euclidean, counter) ==
        doctest::Approx(5.0));
  CHECK(counter.exact_calls == 1);
}

TEST_CASE("distance of a vector to itself is zero") {
  VectorStore store = synth_gaussian(4, 16, 5);
  DistanceCounter counter;
  CHECK(distance(store, 2, store.at(2), Metric::Euclidean, counter) ==
        doctest::Approx(0.0));
}

TEST_CASE("random d=128 distances match the high-precision reference") {
  VectorStore store = synth_gaussian(64, 128, 17);
  DistanceCounter counter;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<VectorId> pick(0, 63);
  for (int i = 0; i < 200; ++i) {
    VectorId a = pick(rng);
    VectorId b = pick(rng);
    double got = distance(store, a, store.at(b), Metric::Euclidean, counter);
    double want = helpers::ref_l2_distance(store.at(a), store.at(b));
    if (want > 0) {
      CHECK(std::fabs(got - want) / want <= 1e-4);
    } else {
      CHECK(got == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("counter increments exactly once per exact call") {
  VectorStore store = synth_gaussian(8, 16, 5);
  DistanceCounter counter;
  for (int i = 0; i < 5; ++i) {
    distance(store, 0, store.at(1), Metric::Euclidean, counter);
  }
  CHECK(counter.exact_calls == 5);
}

TEST_CASE("distance rejects dimension mismatch") {
  VectorStore store = synth_gaussian(2, 8, 5);
  std::vector<float> q(7, 0.0f);
  DistanceCounter counter;
  CHECK_THROWS_AS(distance(store, 0, q, Metric::Euclidean, counter),
                  std::invalid_argument);
}

TEST_CASE("euclidean distance is symmetric") {
  VectorStore store = synth_gaussian(32, 64, 23);
  DistanceCounter counter;
  for (VectorId a = 0; a < 8; ++a) {
    for (VectorId b = 0; b < 8; ++b) {
      double ab = distance(store, a, store.at(b), Metric::Euclidean, counter);
      double ba = distance(store, b, store.at(a), Metric::Euclidean, counter);
      CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
    }
  }
}

TEST_CASE("norm basics") {
  VectorStore store(2, {3.0f, 4.0f, 0.0f, 0.0f});
  CHECK(norm(store, 0) == doctest::Approx(5.0));
  CHECK(norm(store, 1) == doctest::Approx(0.0));
}

TEST_CASE("norm matches the high-precision reference on random d=128") {
  VectorStore store = synth_gaussian(32, 128, 29);
  for (VectorId i = 0; i < 32; ++i) {
    double want = helpers::ref_norm(store.at(i));
    CHECK(std::fabs(norm(store, i) - want) / want <= 1e-6);
  }
}

TEST_CASE("cached norms agree with direct computation") {
  VectorStore store = synth_gaussian(100, 48, 31);
  store.compute_norms();
  REQUIRE(store.has_norms());
  for (VectorId i = 0; i < 100; ++i) {
    double want = helpers::ref_norm(store.at(i));
    CHECK(std::fabs(store.norms[i] - want) <= 1e-5 * want);
  }
}

TEST_CASE("euclidean_from_ip basics") {
  CHECK(euclidean_from_ip(1.0, 1.0, 0.0) == doctest::Approx(0.0));
  CHECK(euclidean_from_ip(1.0, 1.0, 1.0) == doctest::Approx(std::sqrt(2.0)));
  // slight negativity from rounding is absorbed by the clamp
  CHECK(euclidean_from_ip(1.0, 1.0, -1e-12) == doctest::Approx(0.0));
}

TEST_CASE("inner-product bridge equals direct euclidean on random pairs") {
  VectorStore store = synth_gaussian(64, 96, 37);
  store.compute_norms();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<VectorId> pick(0, 63);
  for (int i = 0; i < 200; ++i) {
    VectorId c = pick(rng);
    VectorId q = pick(rng);
    if (c == q) continue;  // cancellation noise dominates a true zero
    double ip_dist = 1.0 - helpers::ref_dot(store.at(c), store.at(q));
    double bridged = euclidean_from_ip(norm(store, c), norm(store, q), ip_dist);
    double direct = helpers::ref_l2_distance(store.at(c), store.at(q));
    CHECK(std::fabs(bridged - direct) / direct <= 1e-4);
  }
}

TEST_CASE("squared-identity between euclidean and inner-product forms") {
  // |c-q|^2 = |c|^2 + |q|^2 + 2*(1 - c.q) - 2 on arbitrary random pairs
  VectorStore store = synth_gaussian(200, 64, 41);
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<VectorId> pick(0, 199);
  for (int i = 0; i < 1000; ++i) {
    VectorId c = pick(rng);
    VectorId q = pick(rng);
    double lhs = std::pow(helpers::ref_l2_distance(store.at(c), store.at(q)), 2);
    double nc = helpers::ref_norm(store.at(c));
    double nq = helpers::ref_norm(store.at(q));
    double rhs = nc * nc + nq * nq +
                 2.0 * (1.0 - helpers::ref_dot(store.at(c), store.at(q))) - 2.0;
    CHECK(std::fabs(lhs - rhs) <= 1e-4 * std::max(1.0, std::fabs(lhs)));
  }
}

TEST_CASE("counted inner-product distance goes through the bridge") {
  VectorStore store = synth_gaussian(16, 32, 43);
  store.compute_norms();
  DistanceCounter counter;
  double got = distance(store, 3, store.at(7), Metric::InnerProduct, counter);
  double want = helpers::ref_l2_distance(store.at(3), store.at(7));
  CHECK(got == doctest::Approx(want).epsilon(1e-4));
  CHECK(counter.exact_calls == 1);
}

TEST_CASE("prepare_for_metric enforces cosine normalization") {
  VectorStore raw = synth_gaussian(10, 16, 47);
  CHECK_THROWS_AS(prepare_for_metric(raw, Metric::Cosine),
                  std::invalid_argument);

  VectorStore unit = synth_gaussian(10, 16, 47);
  for (std::size_t i = 0; i < unit.count(); ++i) {
    double n = helpers::ref_norm(unit.at(static_cast<VectorId>(i)));
    for (std::uint32_t j = 0; j < unit.dim; ++j) {
      unit.data[i * unit.dim + j] = static_cast<float>(unit.data[i * unit.dim + j] / n);
    }
  }
  CHECK_NOTHROW(prepare_for_metric(unit, Metric::Cosine));
  CHECK(unit.has_norms());
}

TEST_CASE("metric names round-trip") {
  for (Metric m : {Metric::Euclidean, Metric::InnerProduct, Metric::Cosine}) {
    CHECK(metric_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(metric_from_string("hamming"), std::invalid_argument);
}
