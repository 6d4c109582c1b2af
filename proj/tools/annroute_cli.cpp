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

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "annroute/angle_profile.hpp"
#include "annroute/angle_sampler.hpp"
#include "annroute/bench.hpp"
#include "annroute/dataset_io.hpp"
#include "annroute/hnsw_index.hpp"
#include "annroute/search.hpp"
#include "annroute/vector_store.hpp"

namespace {

using namespace annroute;

// ANN_SEED, when set, wins over any --seed flag.
std::uint64_t effective_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("ANN_SEED")) {
    return std::stoull(env);
  }
  return flag_seed;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void cmd_synth(std::size_t n, std::uint32_t d, std::uint64_t seed,
               const std::string& out) {
  VectorStore store = synth_gaussian(n, d, effective_seed(seed));
  write_fvecs(store, out);
  std::cout << "wrote " << store.count() << " vectors of dim " << store.dim
            << " to " << out << "\n";
}

void cmd_build(const std::string& base_path, std::uint32_t M,
               std::uint32_t efc, const std::string& metric_name,
               std::uint64_t seed, const std::string& out) {
  Metric metric = metric_from_string(metric_name);
  VectorStore store = read_vectors_auto(base_path);
  prepare_for_metric(store, metric);
  auto t0 = std::chrono::steady_clock::now();
  HnswIndex index = hnsw_build(store, M, efc, metric, effective_seed(seed));
  double secs = elapsed_since(t0);
  save_index(index, out);
  std::cout << "built index over " << index.size() << " vectors (dim "
            << index.dim << ", M=" << M << ", efc=" << efc << ", metric "
            << to_string(metric) << ") in " << secs << " s; "
            << index.edge_count() << " base-layer edges; saved to " << out
            << "\n";
}

void cmd_ground_truth(const std::string& base_path,
                      const std::string& queries_path, std::uint32_t k,
                      const std::string& metric_name, const std::string& out) {
  Metric metric = metric_from_string(metric_name);
  VectorStore base = read_vectors_auto(base_path);
  VectorStore queries = read_vectors_auto(queries_path);
  prepare_for_metric(base, metric);
  auto t0 = std::chrono::steady_clock::now();
  GroundTruth gt = brute_force_ground_truth(base, queries, k, metric);
  write_ground_truth(gt, out);
  std::cout << "exact top-" << k << " for " << queries.count()
            << " queries in " << elapsed_since(t0) << " s; saved to " << out
            << "\n";
}

void cmd_profile(const std::string& base_path, const std::string& index_path,
                 std::size_t n_sample, std::uint64_t seed) {
  IndexSummary summary = read_index_summary(index_path);
  VectorStore store = read_vectors_auto(base_path);
  prepare_for_metric(store, summary.metric);
  HnswIndex index = load_index(index_path, store);
  if (n_sample == 0) n_sample = default_sample_count(index.size());
  auto t0 = std::chrono::steady_clock::now();
  AngleProfile profile =
      sample_angles(index, store, n_sample, effective_seed(seed));
  double secs = elapsed_since(t0);
  index.profile = profile;
  save_index(index, index_path);
  std::cout << "profiled " << n_sample << " pseudo-queries ("
            << profile.total << " angles) in " << secs
            << " s; p50=" << percentile(profile, 50.0)
            << " rad, p90=" << percentile(profile, 90.0)
            << " rad, p99=" << percentile(profile, 99.0)
            << " rad; profile stored in " << index_path << "\n";
}

void cmd_sweep(const std::string& base_path, const std::string& index_path,
               const std::string& queries_path, const std::string& gt_path,
               const std::vector<std::uint32_t>& efs_list,
               const std::vector<std::string>& mode_names,
               double theta_percentile, std::uint32_t k, std::uint32_t reps,
               const std::string& out) {
  IndexSummary summary = read_index_summary(index_path);
  VectorStore base = read_vectors_auto(base_path);
  prepare_for_metric(base, summary.metric);
  HnswIndex index = load_index(index_path, base);
  VectorStore queries = read_vectors_auto(queries_path);
  GroundTruth gt = read_ground_truth(gt_path);

  SweepConfig config;
  config.efs_list = efs_list;
  config.k = k;
  config.repetitions = reps;
  bool needs_theta = false;
  for (const auto& name : mode_names) {
    SearchMode mode = search_mode_from_string(name);
    config.modes.push_back(mode);
    needs_theta = needs_theta || mode_needs_theta(mode);
  }
  if (needs_theta) {
    if (!index.profile) {
      throw std::runtime_error(
          "index has no angle profile; run `profile` before sweeping with "
          "crouting modes");
    }
    config.theta = percentile(*index.profile, theta_percentile);
    std::cout << "pruning angle: " << config.theta << " rad ("
              << theta_percentile << "th percentile)\n";
  }

  auto rows = run_sweep(index, base, queries, gt, config);
  write_sweep_csv(rows, out);
  write_sweep_csv(std::cout, rows);
  std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
}

void cmd_angle_report(const std::string& index_path, const std::string& out) {
  IndexSummary summary = read_index_summary(index_path);
  if (!summary.profile) {
    throw std::runtime_error(
        "index has no angle profile; run `profile` first");
  }
  const AngleProfile& profile = *summary.profile;
  if (profile.total == 0) throw std::runtime_error("angle profile is empty");
  std::ofstream fout(out, std::ios::trunc);
  if (!fout) throw std::runtime_error("cannot open file for write: " + out);
  double bin_width = std::numbers::pi / AngleProfile::kBins;
  fout << "bin_low_rad,bin_high_rad,count,empirical_density,"
          "analytic_density\n";
  for (std::size_t i = 0; i < profile.bins.size(); ++i) {
    double low = i * bin_width;
    double high = (i + 1) * bin_width;
    double density = static_cast<double>(profile.bins[i]) /
                     static_cast<double>(profile.total) / bin_width;
    fout << low << ',' << high << ',' << profile.bins[i] << ',' << density
         << ',' << analytic_density(0.5 * (low + high),
                                    static_cast<int>(profile.d))
         << '\n';
  }
  std::cout << "wrote angle report (" << profile.total << " samples, dim "
            << profile.d << ") to " << out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph ANN benchmark harness with estimator-pruned routing"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a Gaussian fvecs file");
  std::size_t synth_n = 0;
  std::uint32_t synth_d = 0;
  std::uint64_t synth_seed = 42;
  std::string synth_out;
  synth->add_option("--n", synth_n, "number of vectors")->required();
  synth->add_option("--d", synth_d, "dimensionality")->required();
  synth->add_option("--seed", synth_seed, "rng seed (default 42)");
  synth->add_option("--out", synth_out, "output .fvecs path")->required();
  synth->callback([&] { cmd_synth(synth_n, synth_d, synth_seed, synth_out); });

  // build
  auto* build = app.add_subcommand("build", "build an index from vectors");
  std::string build_base, build_out, build_metric = "euclidean";
  std::uint32_t build_M = 32, build_efc = 256;
  std::uint64_t build_seed = 42;
  build->add_option("--base", build_base, "base vectors (.fvecs or .bvecs)")
      ->required();
  build->add_option("--M", build_M, "max neighbors per node (default 32)");
  build->add_option("--efc", build_efc,
                    "construction beam width (default 256)");
  build->add_option("--metric", build_metric,
                    "euclidean | inner_product | cosine");
  build->add_option("--seed", build_seed, "rng seed (default 42)");
  build->add_option("--out", build_out, "output index path")->required();
  build->callback([&] {
    cmd_build(build_base, build_M, build_efc, build_metric, build_seed,
              build_out);
  });

  // ground-truth
  auto* gt = app.add_subcommand("ground-truth",
                                "exact k-NN via exhaustive scan");
  std::string gt_base, gt_queries, gt_out, gt_metric = "euclidean";
  std::uint32_t gt_k = 0;
  gt->add_option("--base", gt_base, "base vectors")->required();
  gt->add_option("--queries", gt_queries, "query vectors")->required();
  gt->add_option("--k", gt_k, "neighbors per query")->required();
  gt->add_option("--metric", gt_metric, "euclidean | inner_product | cosine");
  gt->add_option("--out", gt_out, "output .ivecs path")->required();
  gt->callback(
      [&] { cmd_ground_truth(gt_base, gt_queries, gt_k, gt_metric, gt_out); });

  // profile
  auto* profile = app.add_subcommand(
      "profile", "sample search-path angles and store them in the index");
  std::string profile_base, profile_index;
  std::size_t profile_n = 0;
  std::uint64_t profile_seed = 42;
  profile->add_option("--base", profile_base, "base vectors")->required();
  profile->add_option("--index", profile_index, "index path")->required();
  profile->add_option("--n-sample", profile_n,
                      "pseudo-queries (default 0.1% of N)");
  profile->add_option("--seed", profile_seed, "rng seed (default 42)");
  profile->callback(
      [&] { cmd_profile(profile_base, profile_index, profile_n, profile_seed); });

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "recall/QPS/hops/speedup table over efs values and modes");
  std::string sweep_base, sweep_index, sweep_queries, sweep_gt, sweep_out;
  std::vector<std::uint32_t> sweep_efs;
  std::vector<std::string> sweep_modes = {"baseline", "crouting"};
  double sweep_percentile = 90.0;
  std::uint32_t sweep_k = 10, sweep_reps = 3;
  sweep->add_option("--base", sweep_base, "base vectors")->required();
  sweep->add_option("--index", sweep_index, "index path")->required();
  sweep->add_option("--queries", sweep_queries, "query vectors")->required();
  sweep->add_option("--gt", sweep_gt, "ground-truth .ivecs")->required();
  sweep->add_option("--efs", sweep_efs, "efs values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--modes", sweep_modes,
                    "baseline | crouting | crouting_o | triangle")
      ->delimiter(',');
  sweep->add_option("--theta-percentile", sweep_percentile,
                    "pruning-angle percentile (default 90)");
  sweep->add_option("--k", sweep_k, "results per query (default 10)");
  sweep->add_option("--reps", sweep_reps, "timing repetitions (default 3)");
  sweep->add_option("--out", sweep_out, "output CSV path")->required();
  sweep->callback([&] {
    cmd_sweep(sweep_base, sweep_index, sweep_queries, sweep_gt, sweep_efs,
              sweep_modes, sweep_percentile, sweep_k, sweep_reps, sweep_out);
  });

  // angle-report
  auto* report = app.add_subcommand(
      "angle-report", "empirical vs analytic angle density CSV");
  std::string report_index, report_out;
  report->add_option("--index", report_index, "index path")->required();
  report->add_option("--out", report_out, "output CSV path")->required();
  report->callback([&] { cmd_angle_report(report_index, report_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
