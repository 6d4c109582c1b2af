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

#include "annroute/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace annroute {

double recall_at_k(std::span<const VectorId> result,
                   std::span<const VectorId> truth, std::uint32_t k) {
  if (k == 0) throw std::invalid_argument("recall_at_k needs k >= 1");
  if (truth.size() < k) {
    throw std::invalid_argument("ground-truth row shorter than k");
  }
  std::size_t n_result = std::min<std::size_t>(result.size(), k);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_result; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (result[i] == truth[j]) {
        hits += 1;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

namespace {

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct ModeRun {
  double recall = 0.0;
  std::uint64_t hops_total = 0;
  double qps = 0.0;
};

ModeRun run_mode(const HnswIndex& index, const VectorStore& base,
                 const VectorStore& queries, const GroundTruth& gt,
                 const SweepConfig& config, SearchMode mode,
                 std::uint32_t efs) {
  SearchParams params;
  params.efs = efs;
  params.k = config.k;
  params.mode = mode;
  params.theta = config.theta;

  ModeRun run;
  std::uint32_t passes = std::max<std::uint32_t>(1, config.repetitions);
  std::vector<double> elapsed;
  elapsed.reserve(passes);
  std::vector<VectorId> ids;
  double recall_sum = 0.0;

  for (std::uint32_t rep = 0; rep < passes; ++rep) {
    SearchContext ctx(index, base);
    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t qi = 0; qi < queries.count(); ++qi) {
      QueryResult res =
          ctx.search(queries.at(static_cast<VectorId>(qi)), params);
      if (rep == 0) {
        run.hops_total += res.stats.hops;
        ids.clear();
        for (const auto& e : res.neighbors) ids.push_back(e.id);
        recall_sum += recall_at_k(ids, gt.rows[qi], config.k);
      }
    }
    auto t1 = std::chrono::steady_clock::now();
    elapsed.push_back(std::chrono::duration<double>(t1 - t0).count());
  }

  if (queries.count() > 0) {
    run.recall = recall_sum / static_cast<double>(queries.count());
    double med = median(std::move(elapsed));
    run.qps = med > 0.0 ? static_cast<double>(queries.count()) / med : 0.0;
  }
  return run;
}

struct ErrorStats {
  double avg_rel_err = 0.0;
  double incorrect_prune_ratio = 0.0;
};

// Hook-instrumented pass. True distances are recomputed through a scratch
// counter so the measured recall/hops stay untouched.
ErrorStats measure_error_stats(const HnswIndex& index, const VectorStore& base,
                               const VectorStore& queries,
                               const SweepConfig& config, SearchMode mode,
                               std::uint32_t efs) {
  SearchParams params;
  params.efs = efs;
  params.k = config.k;
  params.mode = mode;
  params.theta = config.theta;

  std::size_t events = 0;
  std::size_t pruned_events = 0;
  std::size_t incorrect = 0;
  double rel_err_sum = 0.0;
  std::size_t rel_err_n = 0;
  DistanceCounter scratch;

  SearchContext ctx(index, base);
  for (std::size_t qi = 0; qi < queries.count(); ++qi) {
    auto q = queries.at(static_cast<VectorId>(qi));
    double q_norm =
        index.metric == Metric::Euclidean ? -1.0 : vector_norm(q);
    SearchHooks hooks;
    hooks.on_prune_check = [&](VectorId n, double approx, double upper_bound,
                               bool pruned) {
      events += 1;
      double true_d = distance(base, n, q, index.metric, scratch, q_norm);
      if (true_d > 1e-12) {
        rel_err_sum += std::fabs(true_d - approx) / true_d;
        rel_err_n += 1;
      }
      if (pruned) {
        pruned_events += 1;
        if (true_d < upper_bound) incorrect += 1;
      }
    };
    ctx.search(q, params, &hooks);
    if (events >= config.min_error_events) break;
  }

  ErrorStats stats;
  if (rel_err_n > 0) {
    stats.avg_rel_err = rel_err_sum / static_cast<double>(rel_err_n);
  }
  if (pruned_events > 0) {
    stats.incorrect_prune_ratio =
        static_cast<double>(incorrect) / static_cast<double>(pruned_events);
  }
  return stats;
}

}  // namespace

std::vector<SweepRow> run_sweep(const HnswIndex& index,
                                const VectorStore& base,
                                const VectorStore& queries,
                                const GroundTruth& gt,
                                const SweepConfig& config) {
  if (gt.rows.size() != queries.count()) {
    throw std::invalid_argument(
        "ground truth missing or row count does not match the query set");
  }
  if (gt.k < config.k) {
    throw std::invalid_argument("ground truth holds fewer ids than k");
  }

  std::vector<SweepRow> rows;
  for (std::uint32_t efs : config.efs_list) {
    // Baseline always runs: it is the speedup denominator at this efs.
    ModeRun baseline = run_mode(index, base, queries, gt, config,
                                SearchMode::Baseline, efs);
    for (SearchMode mode : config.modes) {
      ModeRun run = mode == SearchMode::Baseline
                        ? baseline
                        : run_mode(index, base, queries, gt, config, mode,
                                   efs);
      SweepRow row;
      row.mode = std::string(to_string(mode));
      row.efs = efs;
      row.k = config.k;
      row.recall = run.recall;
      row.qps = run.qps;
      row.hops_total = run.hops_total;
      row.speedup = run.hops_total > 0
                        ? static_cast<double>(baseline.hops_total) /
                              static_cast<double>(run.hops_total)
                        : 1.0;
      if (mode_uses_pruning(mode)) {
        ErrorStats err =
            measure_error_stats(index, base, queries, config, mode, efs);
        row.avg_rel_err = err.avg_rel_err;
        row.incorrect_prune_ratio = err.incorrect_prune_ratio;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "mode,efs,k,recall,qps,hops_total,speedup,avg_rel_err,"
         "incorrect_prune_ratio\n";
  char buf[128];
  for (const auto& row : rows) {
    out << row.mode << ',' << row.efs << ',' << row.k << ',';
    std::snprintf(buf, sizeof(buf), "%.6f", row.recall);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.3f", row.qps);
    out << buf << ',' << row.hops_total << ',';
    std::snprintf(buf, sizeof(buf), "%.6f", row.speedup);
    out << buf << ',';
    if (row.avg_rel_err) {
      std::snprintf(buf, sizeof(buf), "%.6f", *row.avg_rel_err);
      out << buf;
    }
    out << ',';
    if (row.incorrect_prune_ratio) {
      std::snprintf(buf, sizeof(buf), "%.6f", *row.incorrect_prune_ratio);
      out << buf;
    }
    out << '\n';
  }
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for write: " + path);
  write_sweep_csv(out, rows);
}

}  // namespace annroute
