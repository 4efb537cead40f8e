// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bnp/dag.hpp"
#include "bnp/dataset.hpp"
#include "bnp/proxy.hpp"
#include "bnp/search.hpp"
#include "bnp/smoothlab.hpp"

namespace bnp {

struct BenchConfig {
  std::string data_path;
  double ess = 1.0;
  int ns = 50;             // training-sample count for proxy mode
  double edge_prob = -1.0; // < 0 selects min(0.5, 4/n)
  std::uint64_t seed = 0;
  std::string mode = "exact";  // exact | proxy | both
  int max_steps = -1;          // < 0 selects the search default
  int repeats = 5;
  bool record_exact = false;   // per-step exact scores on proxy trajectories
  int tune_max_iters = 200;
  double tune_tol = 1e-6;

  static BenchConfig from_json(const nlohmann::json& j);
  static BenchConfig from_json_file(const std::string& path);
  nlohmann::ordered_json to_json() const;
  void validate() const;
};

struct TuneInfo {
  int iterations = 0;
  double lml = 0.0;
  bool warning = false;
};

struct RepeatResult {
  int repeat = 0;
  std::uint64_t seed = 0;
  double final_exact_score = 0.0;
  int steps = 0;
  int edges = 0;
  double wall_time_s = 0.0;
  std::string trajectory_file;  // relative to the output directory
  std::string final_graph_file;
  std::string error;  // nonempty when this repeat failed
  std::optional<TuneInfo> tune;
  std::optional<Dag> final_graph;
  SearchTrajectory trajectory;
};

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;  // population form; 0 for a single repeat
  double median = 0.0;
};

Stats compute_stats(const std::vector<double>& values);

struct ModeResult {
  std::vector<RepeatResult> repeats;
  Stats score;
  Stats time_s;
};

struct BenchResult {
  BenchConfig config;
  std::map<std::string, ModeResult> modes;

  nlohmann::ordered_json to_json() const;
};

// Removes wall-clock fields so results from identical seeds compare equal.
nlohmann::ordered_json strip_timing(nlohmann::ordered_json j);

// One benchmark run. Proxy repeats sample ns graphs, score them exactly,
// tune the kernel weights, fit, search under the proxy, then re-score the
// final graph exactly (reported scores are always exact). The wall time of
// a proxy repeat covers sampling + scoring + tuning + fitting + search;
// exact repeats time the search. Dataset loading is excluded. A failing
// stage is recorded on its repeat and the run continues. When out_dir is
// nonempty, result.json, trajectory CSVs, and final graphs are written
// there.
BenchResult run_benchmark(const BenchConfig& cfg, const std::string& out_dir = "");

struct NsSweepRow {
  int ns = 0;
  double time_mean = 0.0;
  double time_std = 0.0;
  double score_mean = 0.0;
  double score_std = 0.0;
};

// run_benchmark per n_s value; emits bubble-plot rows (and ns_sweep.csv /
// ns_sweep.json under out_dir when set).
std::vector<NsSweepRow> ns_sweep(const BenchConfig& cfg, const std::vector<int>& ns_values,
                                 const std::string& out_dir = "");

struct AgreementResult {
  double rate = 0.0;  // in [0, 1]
  std::int64_t moves = 0;
  std::int64_t agreeing = 0;
};

using DeltaFn = std::function<double(const Dag&, const Move&)>;

// Fraction of legal probe moves on which two delta evaluators agree in sign.
// Moves where the reference delta is exactly zero are excluded.
AgreementResult sign_agreement_rate(const std::vector<Dag>& probes, const DeltaFn& reference,
                                    const DeltaFn& candidate);

// Sign agreement of a trained proxy against the exact scorer over all legal
// moves from the empty graph plus `probe_count` sampled graphs.
AgreementResult gradient_agreement(const Dataset& d, const GpModel& model, double ess,
                                   std::uint64_t seed, int probe_count);

// Writes sweep.csv (N, delta) and summary.json for a smoothness sweep.
void write_sweep_outputs(const SweepFit& fit, SweepPattern pattern, double lambda,
                         const std::string& out_dir);

}  // namespace bnp
