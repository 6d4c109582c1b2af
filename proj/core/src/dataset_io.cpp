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

#include "annroute/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <queue>
#include <random>
#include <stdexcept>
#include <thread>

namespace annroute {

namespace {

std::vector<char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  auto size = static_cast<std::size_t>(in.tellg());
  std::vector<char> buf(size);
  in.seekg(0);
  if (size > 0 && !in.read(buf.data(), static_cast<std::streamsize>(size))) {
    throw std::runtime_error("read failed: " + path);
  }
  return buf;
}

std::int32_t read_i32le(const char* p) {
  std::int32_t v;
  std::memcpy(&v, p, sizeof(v));
  return v;  // little-endian host assumed, as in the file format
}

// Shared record walk for the three TEXMEX layouts. elem_size is the on-disk
// element width; emit() consumes one record's payload.
template <typename Emit>
std::int32_t parse_records(const std::vector<char>& buf, std::size_t elem_size,
                           const std::string& path, Emit emit) {
  std::int32_t dim = -1;
  std::size_t off = 0;
  while (off < buf.size()) {
    if (off + 4 > buf.size()) {
      throw std::runtime_error("truncated record header in " + path);
    }
    std::int32_t d = read_i32le(buf.data() + off);
    off += 4;
    if (d <= 0) {
      throw std::runtime_error("non-positive dimension " + std::to_string(d) +
                               " in " + path);
    }
    if (dim == -1) {
      dim = d;
    } else if (d != dim) {
      throw std::runtime_error("inconsistent dimensions in " + path + ": " +
                               std::to_string(dim) + " vs " +
                               std::to_string(d));
    }
    std::size_t payload = static_cast<std::size_t>(d) * elem_size;
    if (off + payload > buf.size()) {
      throw std::runtime_error("truncated record payload in " + path);
    }
    emit(buf.data() + off, static_cast<std::size_t>(d));
    off += payload;
  }
  return dim;
}

}  // namespace

VectorStore read_fvecs(const std::string& path) {
  auto buf = read_file(path);
  std::vector<float> data;
  std::int32_t dim = parse_records(
      buf, sizeof(float), path, [&](const char* p, std::size_t d) {
        std::size_t old = data.size();
        data.resize(old + d);
        std::memcpy(data.data() + old, p, d * sizeof(float));
      });
  return VectorStore(dim > 0 ? static_cast<std::uint32_t>(dim) : 0,
                     std::move(data));
}

VectorStore read_bvecs(const std::string& path) {
  auto buf = read_file(path);
  std::vector<float> data;
  std::int32_t dim =
      parse_records(buf, 1, path, [&](const char* p, std::size_t d) {
        for (std::size_t i = 0; i < d; ++i) {
          data.push_back(static_cast<float>(static_cast<unsigned char>(p[i])));
        }
      });
  return VectorStore(dim > 0 ? static_cast<std::uint32_t>(dim) : 0,
                     std::move(data));
}

std::vector<std::vector<std::int32_t>> read_ivecs(const std::string& path) {
  auto buf = read_file(path);
  std::vector<std::vector<std::int32_t>> rows;
  parse_records(buf, sizeof(std::int32_t), path,
                [&](const char* p, std::size_t d) {
                  std::vector<std::int32_t> row(d);
                  std::memcpy(row.data(), p, d * sizeof(std::int32_t));
                  rows.push_back(std::move(row));
                });
  return rows;
}

void write_fvecs(const VectorStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for write: " + path);
  std::int32_t d = static_cast<std::int32_t>(store.dim);
  for (std::size_t i = 0; i < store.count(); ++i) {
    out.write(reinterpret_cast<const char*>(&d), sizeof(d));
    out.write(reinterpret_cast<const char*>(store.vec(
                  static_cast<VectorId>(i))),
              static_cast<std::streamsize>(store.dim * sizeof(float)));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_bvecs(const VectorStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for write: " + path);
  std::int32_t d = static_cast<std::int32_t>(store.dim);
  std::vector<unsigned char> row(store.dim);
  for (std::size_t i = 0; i < store.count(); ++i) {
    const float* v = store.vec(static_cast<VectorId>(i));
    for (std::uint32_t j = 0; j < store.dim; ++j) {
      float x = v[j];
      if (x < 0.0f || x > 255.0f || x != std::floor(x)) {
        throw std::invalid_argument(
            "bvecs requires integral components in [0, 255]");
      }
      row[j] = static_cast<unsigned char>(x);
    }
    out.write(reinterpret_cast<const char*>(&d), sizeof(d));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_ivecs(const std::vector<std::vector<std::int32_t>>& rows,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for write: " + path);
  for (const auto& row : rows) {
    std::int32_t d = static_cast<std::int32_t>(row.size());
    out.write(reinterpret_cast<const char*>(&d), sizeof(d));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(std::int32_t)));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

VectorStore read_vectors_auto(const std::string& path) {
  if (path.size() >= 6 && path.ends_with(".fvecs")) return read_fvecs(path);
  if (path.size() >= 6 && path.ends_with(".bvecs")) return read_bvecs(path);
  throw std::invalid_argument("unsupported vector file extension: " + path);
}

VectorStore synth_gaussian(std::size_t n, std::uint32_t d, std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("synth_gaussian needs d >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<float> data;
  data.reserve(n * d);
  for (std::size_t i = 0; i < n * static_cast<std::size_t>(d); ++i) {
    data.push_back(static_cast<float>(normal(rng)));
  }
  return VectorStore(n == 0 ? 0 : d, std::move(data));
}

GroundTruth brute_force_ground_truth(const VectorStore& base,
                                     const VectorStore& queries,
                                     std::uint32_t k, Metric metric,
                                     unsigned threads) {
  if (k == 0) throw std::invalid_argument("ground truth needs k >= 1");
  if (k > base.count()) {
    throw std::invalid_argument("k exceeds base store size");
  }
  if (queries.count() > 0 && queries.dim != base.dim) {
    throw std::invalid_argument("query/base dimension mismatch");
  }

  GroundTruth gt;
  gt.k = k;
  gt.rows.resize(queries.count());

  auto scan_range = [&](std::size_t begin, std::size_t end) {
    using Entry = std::pair<double, VectorId>;  // (distance, id), max-heap
    DistanceCounter scratch;
    for (std::size_t qi = begin; qi < end; ++qi) {
      auto q = queries.at(static_cast<VectorId>(qi));
      double q_norm = metric == Metric::Euclidean ? 0.0 : vector_norm(q);
      std::priority_queue<Entry> heap;
      for (std::size_t bi = 0; bi < base.count(); ++bi) {
        double dist = distance(base, static_cast<VectorId>(bi), q, metric,
                               scratch, q_norm);
        Entry e{dist, static_cast<VectorId>(bi)};
        if (heap.size() < k) {
          heap.push(e);
        } else if (e < heap.top()) {
          heap.pop();
          heap.push(e);
        }
      }
      std::vector<Entry> sorted;
      sorted.reserve(heap.size());
      while (!heap.empty()) {
        sorted.push_back(heap.top());
        heap.pop();
      }
      std::sort(sorted.begin(), sorted.end());
      auto& row = gt.rows[qi];
      row.reserve(sorted.size());
      for (const auto& [dist, id] : sorted) row.push_back(id);
    }
  };

  unsigned n_threads = threads == 0 ? std::thread::hardware_concurrency()
                                    : threads;
  if (n_threads <= 1 || queries.count() < 2 * n_threads) {
    scan_range(0, queries.count());
    return gt;
  }
  std::vector<std::thread> workers;
  std::size_t chunk = (queries.count() + n_threads - 1) / n_threads;
  for (unsigned t = 0; t < n_threads; ++t) {
    std::size_t begin = t * chunk;
    std::size_t end = std::min(queries.count(), begin + chunk);
    if (begin >= end) break;
    workers.emplace_back(scan_range, begin, end);
  }
  for (auto& w : workers) w.join();
  return gt;
}

void write_ground_truth(const GroundTruth& gt, const std::string& path) {
  std::vector<std::vector<std::int32_t>> rows;
  rows.reserve(gt.rows.size());
  for (const auto& row : gt.rows) {
    std::vector<std::int32_t> ids(row.begin(), row.end());
    rows.push_back(std::move(ids));
  }
  write_ivecs(rows, path);
}

GroundTruth read_ground_truth(const std::string& path) {
  auto rows = read_ivecs(path);
  GroundTruth gt;
  gt.k = rows.empty() ? 0 : static_cast<std::uint32_t>(rows.front().size());
  gt.rows.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<VectorId> ids;
    ids.reserve(row.size());
    for (auto v : row) {
      if (v < 0) throw std::runtime_error("negative id in ground truth file");
      ids.push_back(static_cast<VectorId>(v));
    }
    gt.rows.push_back(std::move(ids));
  }
  return gt;
}

}  // namespace annroute
