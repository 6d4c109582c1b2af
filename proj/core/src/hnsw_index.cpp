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

#include "annroute/hnsw_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>

namespace annroute {

namespace {

struct DistId {
  double dist = 0.0;
  VectorId id = 0;
  bool operator<(const DistId& o) const {
    return dist < o.dist || (dist == o.dist && id < o.id);
  }
  bool operator>(const DistId& o) const { return o < *this; }
};

struct Builder {
  const VectorStore& store;
  HnswIndex idx;
  double level_mult;
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> unif{0.0, 1.0};
  std::vector<std::uint32_t> visit_epoch;
  std::uint32_t epoch = 0;
  DistanceCounter scratch;  // construction-internal counter, never reported

  Builder(const VectorStore& s, std::uint32_t M, std::uint32_t efc,
          Metric metric, std::uint64_t seed)
      : store(s), level_mult(1.0 / std::log(static_cast<double>(M))),
        rng(seed) {
    idx.dim = store.dim;
    idx.M = M;
    idx.efc = efc;
    idx.metric = metric;
    idx.rng_seed = seed;
    idx.levels.resize(store.count());
    idx.layer0.resize(store.count());
    idx.upper.resize(store.count());
    visit_epoch.assign(store.count(), 0);
  }

  double point_norm(VectorId u) const {
    return idx.metric == Metric::Euclidean ? -1.0 : norm(store, u);
  }

  double dist(VectorId a, VectorId b) {
    return distance(store, a, store.at(b), idx.metric, scratch, point_norm(b));
  }

  std::int32_t draw_level() {
    double r = unif(rng);
    if (r <= 0.0) r = std::numeric_limits<double>::min();
    return static_cast<std::int32_t>(-std::log(r) * level_mult);
  }

  void next_epoch() {
    if (++epoch == 0) {
      std::fill(visit_epoch.begin(), visit_epoch.end(), 0);
      epoch = 1;
    }
  }

  template <typename Visit>
  void for_each_neighbor(VectorId u, std::int32_t level, Visit visit) {
    if (level == 0) {
      for (const auto& e : idx.layer0[u]) visit(e.id);
    } else {
      for (VectorId v : idx.upper[u][level - 1]) visit(v);
    }
  }

  // ef-wide beam over one layer; result ascending by (dist, id).
  std::vector<DistId> search_layer(std::span<const float> q, double q_norm,
                                   DistId enter, std::uint32_t ef,
                                   std::int32_t level) {
    next_epoch();
    std::priority_queue<DistId, std::vector<DistId>, std::greater<DistId>>
        cand;
    std::priority_queue<DistId> top;
    cand.push(enter);
    top.push(enter);
    visit_epoch[enter.id] = epoch;
    double lower_bound = enter.dist;
    while (!cand.empty()) {
      DistId c = cand.top();
      if (c.dist > lower_bound && top.size() >= ef) break;
      cand.pop();
      for_each_neighbor(c.id, level, [&](VectorId v) {
        if (visit_epoch[v] == epoch) return;
        visit_epoch[v] = epoch;
        double d = distance(store, v, q, idx.metric, scratch, q_norm);
        if (top.size() < ef || d < top.top().dist) {
          cand.push({d, v});
          top.push({d, v});
          if (top.size() > ef) top.pop();
          lower_bound = top.top().dist;
        }
      });
    }
    std::vector<DistId> out;
    out.reserve(top.size());
    while (!top.empty()) {
      out.push_back(top.top());
      top.pop();
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Keeps a candidate only when it is closer to the connection target than
  // to every neighbor already kept; candidates arrive with distances to the
  // target and are considered in ascending order.
  std::vector<DistId> select_neighbors(std::vector<DistId> cands,
                                       std::uint32_t m) {
    std::sort(cands.begin(), cands.end());
    std::vector<DistId> selected;
    for (const auto& c : cands) {
      if (selected.size() >= m) break;
      bool keep = true;
      for (const auto& s : selected) {
        if (dist(s.id, c.id) < c.dist) {
          keep = false;
          break;
        }
      }
      if (keep) selected.push_back(c);
    }
    return selected;
  }

  void set_edges(VectorId u, std::int32_t level,
                 const std::vector<DistId>& sel) {
    if (level == 0) {
      auto& adj = idx.layer0[u];
      adj.clear();
      for (const auto& s : sel) {
        adj.push_back({s.id, static_cast<float>(s.dist)});
      }
    } else {
      auto& adj = idx.upper[u][level - 1];
      adj.clear();
      for (const auto& s : sel) adj.push_back(s.id);
    }
  }

  void connect(VectorId u, std::int32_t level, std::vector<DistId> cands) {
    auto selected = select_neighbors(std::move(cands), idx.M);
    set_edges(u, level, selected);
    std::uint32_t cap = idx.max_degree(level);
    for (const auto& s : selected) {
      if (level == 0) {
        auto& adj = idx.layer0[s.id];
        if (adj.size() < cap) {
          adj.push_back({u, static_cast<float>(s.dist)});
        } else {
          // Cap overflow: re-select among existing neighbors plus the new
          // node; cached lengths feed the candidate distances directly.
          std::vector<DistId> rev;
          rev.reserve(adj.size() + 1);
          rev.push_back({s.dist, u});
          for (const auto& e : adj) {
            rev.push_back({static_cast<double>(e.dist), e.id});
          }
          set_edges(s.id, 0, select_neighbors(std::move(rev), cap));
        }
      } else {
        auto& adj = idx.upper[s.id][level - 1];
        if (adj.size() < cap) {
          adj.push_back(u);
        } else {
          std::vector<DistId> rev;
          rev.reserve(adj.size() + 1);
          rev.push_back({s.dist, u});
          for (VectorId v : adj) rev.push_back({dist(s.id, v), v});
          set_edges(s.id, level, select_neighbors(std::move(rev), cap));
        }
      }
    }
  }

  void insert(VectorId u) {
    std::int32_t lvl = draw_level();
    idx.levels[u] = lvl;
    idx.upper[u].resize(lvl);
    if (u == 0) {
      idx.entry_point = 0;
      idx.max_level = lvl;
      return;
    }

    std::span<const float> q = store.at(u);
    double q_norm = point_norm(u);
    VectorId cur = idx.entry_point;
    double cur_dist = distance(store, cur, q, idx.metric, scratch, q_norm);
    for (std::int32_t l = idx.max_level; l > lvl; --l) {
      bool changed = true;
      while (changed) {
        changed = false;
        for_each_neighbor(cur, l, [&](VectorId v) {
          double d = distance(store, v, q, idx.metric, scratch, q_norm);
          if (d < cur_dist) {
            cur_dist = d;
            cur = v;
            changed = true;
          }
        });
      }
    }

    DistId enter{cur_dist, cur};
    for (std::int32_t l = std::min(lvl, idx.max_level); l >= 0; --l) {
      auto cands = search_layer(q, q_norm, enter, idx.efc, l);
      enter = cands.front();
      connect(u, l, std::move(cands));
    }
    if (lvl > idx.max_level) {
      idx.max_level = lvl;
      idx.entry_point = u;
    }
  }
};

}  // namespace

std::size_t HnswIndex::edge_count() const {
  std::size_t n = 0;
  for (const auto& adj : layer0) n += adj.size();
  return n;
}

HnswIndex hnsw_build(const VectorStore& store, std::uint32_t M,
                     std::uint32_t efc, Metric metric, std::uint64_t seed) {
  if (store.empty()) {
    throw std::invalid_argument("cannot build an index over an empty store");
  }
  if (M < 2) throw std::invalid_argument("hnsw_build needs M >= 2");
  if (efc < M) throw std::invalid_argument("hnsw_build needs efc >= M");
  if (metric != Metric::Euclidean && !store.has_norms()) {
    throw std::invalid_argument(
        "store lacks cached norms; call prepare_for_metric before building");
  }
  if (store.count() > std::numeric_limits<VectorId>::max()) {
    throw std::invalid_argument("store too large for 32-bit vector ids");
  }
  Builder b(store, M, efc, metric, seed);
  for (std::size_t i = 0; i < store.count(); ++i) {
    b.insert(static_cast<VectorId>(i));
  }
  return std::move(b.idx);
}

const std::vector<LayerEdge>& neighbors_with_dists(const HnswIndex& index,
                                                   VectorId c) {
  if (c >= index.size()) throw std::out_of_range("vector id out of range");
  return index.layer0[c];
}

namespace {

constexpr char kMagic[8] = {'A', 'N', 'R', 'T', 'I', 'D', 'X', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
void get(std::istream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
}

struct RawHeader {
  std::uint32_t version = 0;
  std::uint32_t dim = 0;
  std::uint64_t count = 0;
  std::uint32_t M = 0;
  std::uint32_t efc = 0;
  std::uint32_t metric = 0;
  std::uint64_t seed = 0;
  std::uint32_t entry_point = 0;
  std::int32_t max_level = 0;
};

RawHeader read_header(std::istream& in, const std::string& path) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not an index file (bad magic): " + path);
  }
  RawHeader h;
  get(in, h.version);
  if (h.version != kVersion) {
    throw std::runtime_error("unsupported index file version " +
                             std::to_string(h.version) + ": " + path);
  }
  get(in, h.dim);
  get(in, h.count);
  get(in, h.M);
  get(in, h.efc);
  get(in, h.metric);
  get(in, h.seed);
  get(in, h.entry_point);
  get(in, h.max_level);
  if (!in) throw std::runtime_error("truncated index header: " + path);
  if (h.metric > static_cast<std::uint32_t>(Metric::Cosine)) {
    throw std::runtime_error("corrupt metric field in index header: " + path);
  }
  return h;
}

}  // namespace

void save_index(const HnswIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for write: " + path);
  out.write(kMagic, sizeof(kMagic));
  put(out, kVersion);
  put(out, index.dim);
  put(out, static_cast<std::uint64_t>(index.size()));
  put(out, index.M);
  put(out, index.efc);
  put(out, static_cast<std::uint32_t>(index.metric));
  put(out, index.rng_seed);
  put(out, index.entry_point);
  put(out, index.max_level);
  for (std::int32_t lvl : index.levels) put(out, lvl);
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto& adj = index.layer0[i];
    put(out, static_cast<std::uint32_t>(adj.size()));
    for (const auto& e : adj) {
      put(out, e.id);
      put(out, e.dist);
    }
    for (std::int32_t l = 1; l <= index.levels[i]; ++l) {
      const auto& up = index.upper[i][l - 1];
      put(out, static_cast<std::uint32_t>(up.size()));
      for (VectorId v : up) put(out, v);
    }
  }
  std::uint8_t has_profile = index.profile.has_value() ? 1 : 0;
  put(out, has_profile);
  if (index.profile) write_profile(out, *index.profile);
  if (!out) throw std::runtime_error("write failed: " + path);
}

HnswIndex load_index(const std::string& path, const VectorStore& store) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open index file: " + path);
  RawHeader h = read_header(in, path);
  if (h.dim != store.dim || h.count != store.count()) {
    throw std::runtime_error(
        "index/store mismatch: index has dim " + std::to_string(h.dim) +
        ", count " + std::to_string(h.count) + "; store has dim " +
        std::to_string(store.dim) + ", count " +
        std::to_string(store.count()));
  }

  HnswIndex idx;
  idx.dim = h.dim;
  idx.M = h.M;
  idx.efc = h.efc;
  idx.metric = static_cast<Metric>(h.metric);
  idx.rng_seed = h.seed;
  idx.entry_point = h.entry_point;
  idx.max_level = h.max_level;
  auto count = static_cast<std::size_t>(h.count);
  idx.levels.resize(count);
  for (auto& lvl : idx.levels) get(in, lvl);
  idx.layer0.resize(count);
  idx.upper.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t deg = 0;
    get(in, deg);
    if (!in || deg > count) {
      throw std::runtime_error("corrupt adjacency in index file: " + path);
    }
    idx.layer0[i].resize(deg);
    for (auto& e : idx.layer0[i]) {
      get(in, e.id);
      get(in, e.dist);
      if (e.id >= count) {
        throw std::runtime_error("edge id out of range in index file: " +
                                 path);
      }
    }
    if (idx.levels[i] < 0) {
      throw std::runtime_error("corrupt level in index file: " + path);
    }
    idx.upper[i].resize(idx.levels[i]);
    for (std::int32_t l = 1; l <= idx.levels[i]; ++l) {
      std::uint32_t udeg = 0;
      get(in, udeg);
      if (!in || udeg > count) {
        throw std::runtime_error("corrupt adjacency in index file: " + path);
      }
      auto& up = idx.upper[i][l - 1];
      up.resize(udeg);
      for (auto& v : up) {
        get(in, v);
        if (v >= count) {
          throw std::runtime_error("edge id out of range in index file: " +
                                   path);
        }
      }
    }
  }
  std::uint8_t has_profile = 0;
  get(in, has_profile);
  if (!in) throw std::runtime_error("truncated index file: " + path);
  if (has_profile) idx.profile = read_profile(in);
  return idx;
}

IndexSummary read_index_summary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open index file: " + path);
  RawHeader h = read_header(in, path);
  IndexSummary s;
  s.version = h.version;
  s.dim = h.dim;
  s.count = h.count;
  s.M = h.M;
  s.efc = h.efc;
  s.metric = static_cast<Metric>(h.metric);
  s.rng_seed = h.seed;

  auto count = static_cast<std::size_t>(h.count);
  std::vector<std::int32_t> levels(count);
  for (auto& lvl : levels) get(in, lvl);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t deg = 0;
    get(in, deg);
    in.seekg(static_cast<std::streamoff>(deg * (sizeof(VectorId) +
                                                sizeof(float))),
             std::ios::cur);
    for (std::int32_t l = 1; l <= levels[i]; ++l) {
      std::uint32_t udeg = 0;
      get(in, udeg);
      in.seekg(static_cast<std::streamoff>(udeg * sizeof(VectorId)),
               std::ios::cur);
    }
  }
  std::uint8_t has_profile = 0;
  get(in, has_profile);
  if (!in) throw std::runtime_error("truncated index file: " + path);
  if (has_profile) s.profile = read_profile(in);
  return s;
}

}  // namespace annroute
