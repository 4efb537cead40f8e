// SPDX-License-Identifier: Apache-2.0
#include "bnp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bnp/common.hpp"
#include "bnp/scoring.hpp"
#include "bnp/search.hpp"

namespace bnp {

namespace {

namespace fs = std::filesystem;

int sign_of(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

nlohmann::ordered_json stats_json(const Stats& s) {
  return {{"mean", s.mean}, {"stddev", s.stddev}, {"median", s.median}};
}

}  // namespace

BenchConfig BenchConfig::from_json(const nlohmann::json& j) {
  BenchConfig cfg;
  try {
    cfg.data_path = j.at("data").get<std::string>();
    if (j.contains("ess")) cfg.ess = j.at("ess").get<double>();
    if (j.contains("ns")) cfg.ns = j.at("ns").get<int>();
    if (j.contains("p")) cfg.edge_prob = j.at("p").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("mode")) cfg.mode = j.at("mode").get<std::string>();
    if (j.contains("max_steps")) cfg.max_steps = j.at("max_steps").get<int>();
    if (j.contains("repeats")) cfg.repeats = j.at("repeats").get<int>();
    if (j.contains("record_exact")) cfg.record_exact = j.at("record_exact").get<bool>();
    if (j.contains("tune_max_iters")) cfg.tune_max_iters = j.at("tune_max_iters").get<int>();
    if (j.contains("tune_tol")) cfg.tune_tol = j.at("tune_tol").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bench config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

BenchConfig BenchConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::ordered_json BenchConfig::to_json() const {
  nlohmann::ordered_json j;
  j["data"] = data_path;
  j["ess"] = ess;
  j["ns"] = ns;
  j["p"] = edge_prob;
  j["seed"] = seed;
  j["mode"] = mode;
  j["max_steps"] = max_steps;
  j["repeats"] = repeats;
  j["record_exact"] = record_exact;
  j["tune_max_iters"] = tune_max_iters;
  j["tune_tol"] = tune_tol;
  return j;
}

void BenchConfig::validate() const {
  if (data_path.empty()) throw InvalidArgument("bench config: data path is required");
  if (!(ess > 0.0)) throw InvalidArgument("bench config: ess must be positive");
  if (repeats < 1) throw InvalidArgument("bench config: repeats must be >= 1");
  if (mode != "exact" && mode != "proxy" && mode != "both")
    throw InvalidArgument("bench config: mode must be exact, proxy, or both");
  if (mode != "exact" && ns < 1)
    throw InvalidArgument("bench config: proxy mode needs ns >= 1");
  if (edge_prob > 1.0) throw InvalidArgument("bench config: p must be <= 1");
  if (tune_max_iters < 1) throw InvalidArgument("bench config: tune_max_iters must be >= 1");
  if (!(tune_tol > 0.0)) throw InvalidArgument("bench config: tune_tol must be positive");
}

Stats compute_stats(const std::vector<double>& values) {
  Stats s;
  if (values.empty()) return s;
  const double count = static_cast<double>(values.size());
  for (double v : values) s.mean += v;
  s.mean /= count;
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(var / count);
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

nlohmann::ordered_json BenchResult::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = config.to_json();
  nlohmann::ordered_json jmodes;
  for (const auto& [mode, mr] : modes) {
    nlohmann::ordered_json jm;
    jm["repeats"] = nlohmann::ordered_json::array();
    for (const auto& r : mr.repeats) {
      nlohmann::ordered_json jr;
      jr["repeat"] = r.repeat;
      jr["seed"] = r.seed;
      if (r.error.empty()) {
        jr["final_exact_score"] = r.final_exact_score;
        jr["steps"] = r.steps;
        jr["edges"] = r.edges;
        jr["wall_time_s"] = r.wall_time_s;
        if (!r.trajectory_file.empty()) jr["trajectory"] = r.trajectory_file;
        if (!r.final_graph_file.empty()) jr["final_graph"] = r.final_graph_file;
        if (r.tune) {
          jr["tune"] = {{"iterations", r.tune->iterations},
                        {"lml", r.tune->lml},
                        {"warning", r.tune->warning}};
        }
      } else {
        jr["error"] = r.error;
      }
      jm["repeats"].push_back(std::move(jr));
    }
    jm["score"] = stats_json(mr.score);
    jm["time_s"] = stats_json(mr.time_s);
    jmodes[mode] = std::move(jm);
  }
  j["modes"] = std::move(jmodes);
  return j;
}

nlohmann::ordered_json strip_timing(nlohmann::ordered_json j) {
  if (j.is_object()) {
    j.erase("wall_time_s");
    j.erase("time_s");
    for (auto& [key, value] : j.items()) {
      nlohmann::ordered_json cleaned = strip_timing(value);
      value.swap(cleaned);
    }
  } else if (j.is_array()) {
    for (auto& value : j) {
      nlohmann::ordered_json cleaned = strip_timing(value);
      value.swap(cleaned);
    }
  }
  return j;
}

namespace {

RepeatResult run_exact_repeat(const Dataset& d, const BenchConfig& cfg, int repeat,
                              std::uint64_t seed) {
  RepeatResult rr;
  rr.repeat = repeat;
  rr.seed = seed;
  BdeScorer scorer(d, BdeParams{cfg.ess});
  GreedyOptions opts;
  opts.max_steps = cfg.max_steps;
  const auto t0 = std::chrono::steady_clock::now();
  auto [final_graph, traj] = greedy_search(Dag(d.n()), scorer, opts);
  rr.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rr.final_exact_score = traj.final_score;
  rr.steps = static_cast<int>(traj.steps.size());
  rr.edges = final_graph.edge_count();
  rr.final_graph = std::move(final_graph);
  rr.trajectory = std::move(traj);
  rr.trajectory_file = "exact_r" + std::to_string(repeat) + "_trajectory.csv";
  rr.final_graph_file = "exact_r" + std::to_string(repeat) + "_final_graph.json";
  return rr;
}

RepeatResult run_proxy_repeat(const Dataset& d, const BenchConfig& cfg, int repeat,
                              std::uint64_t seed, double edge_prob) {
  RepeatResult rr;
  rr.repeat = repeat;
  rr.seed = seed;
  const int n = d.n();
  BdeScorer exact(d, BdeParams{cfg.ess});

  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(seed);
  std::vector<Dag> samples;
  samples.reserve(static_cast<std::size_t>(cfg.ns));
  for (int i = 0; i < cfg.ns; ++i) samples.push_back(sample_random_dag(n, edge_prob, rng));

  GpTrainSet train;
  train.n = n;
  train.graphs.resize(samples.size());
  train.scores.resize(static_cast<Eigen::Index>(samples.size()));
  // Training graphs are scored in parallel; each entry lands at its own
  // index, so the result is independent of scheduling.
  parallel_for(samples.size(), [&](std::size_t i) {
    train.graphs[i] = EdgeIndicator::from_dag(samples[i]);
    train.scores(static_cast<Eigen::Index>(i)) = exact.score_graph(samples[i]);
  });

  TuneResult tuned = tune_weights(train, KernelWeights::ones(EdgeIndicator::length(n)), -1.0,
                                  cfg.tune_max_iters, cfg.tune_tol);
  rr.tune = TuneInfo{tuned.iterations, tuned.lml, tuned.warning};
  GpModel model = GpModel::fit(train, std::move(tuned.weights));
  GpScorer proxy(model);

  GreedyOptions opts;
  opts.max_steps = cfg.max_steps;
  if (cfg.record_exact) opts.exact_eval = [&exact](const Dag& g) { return exact.score_graph(g); };
  auto [final_graph, traj] = greedy_search(Dag(n), proxy, opts);
  rr.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // Reported scores always come from the exact scorer.
  rr.final_exact_score = exact.score_graph(final_graph);
  rr.steps = static_cast<int>(traj.steps.size());
  rr.edges = final_graph.edge_count();
  rr.final_graph = std::move(final_graph);
  rr.trajectory = std::move(traj);
  rr.trajectory_file = "proxy_r" + std::to_string(repeat) + "_trajectory.csv";
  rr.final_graph_file = "proxy_r" + std::to_string(repeat) + "_final_graph.json";
  return rr;
}

}  // namespace

BenchResult run_benchmark(const BenchConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const Dataset d = Dataset::load_csv(cfg.data_path);
  const double edge_prob =
      cfg.edge_prob >= 0.0 ? cfg.edge_prob : std::min(0.5, 4.0 / static_cast<double>(d.n()));

  std::vector<std::string> modes;
  if (cfg.mode == "both")
    modes = {"exact", "proxy"};
  else
    modes = {cfg.mode};

  if (!out_dir.empty()) fs::create_directories(out_dir);

  BenchResult result;
  result.config = cfg;
  for (const std::string& mode : modes) {
    ModeResult mr;
    std::vector<double> scores;
    std::vector<double> times;
    for (int r = 0; r < cfg.repeats; ++r) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
      RepeatResult rr;
      try {
        rr = mode == "exact" ? run_exact_repeat(d, cfg, r, seed)
                             : run_proxy_repeat(d, cfg, r, seed, edge_prob);
        if (!out_dir.empty()) {
          rr.trajectory.write_csv(out_dir + "/" + rr.trajectory_file);
          rr.final_graph->to_json_file(out_dir + "/" + rr.final_graph_file);
        }
        scores.push_back(rr.final_exact_score);
        times.push_back(rr.wall_time_s);
      } catch (const std::exception& e) {
        rr.repeat = r;
        rr.seed = seed;
        rr.error = e.what();
      }
      mr.repeats.push_back(std::move(rr));
    }
    mr.score = compute_stats(scores);
    mr.time_s = compute_stats(times);
    result.modes.emplace(mode, std::move(mr));
  }

  if (!out_dir.empty()) write_text(out_dir + "/result.json", result.to_json().dump(2) + "\n");
  return result;
}

std::vector<NsSweepRow> ns_sweep(const BenchConfig& cfg, const std::vector<int>& ns_values,
                                 const std::string& out_dir) {
  if (ns_values.empty()) throw InvalidArgument("ns_sweep: needs at least one ns value");
  if (!out_dir.empty()) fs::create_directories(out_dir);

  std::vector<NsSweepRow> rows;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (int ns : ns_values) {
    BenchConfig cell_cfg = cfg;
    cell_cfg.ns = ns;
    const std::string cell_dir = out_dir.empty() ? "" : out_dir + "/ns_" + std::to_string(ns);
    BenchResult res = run_benchmark(cell_cfg, cell_dir);
    const ModeResult& mr =
        res.modes.count("proxy") ? res.modes.at("proxy") : res.modes.begin()->second;
    rows.push_back({ns, mr.time_s.mean, mr.time_s.stddev, mr.score.mean, mr.score.stddev});
    cells.push_back(res.to_json());
  }

  if (!out_dir.empty()) {
    std::string csv = "ns,time_mean_s,time_std_s,score_mean,score_std\n";
    char line[256];
    for (const auto& row : rows) {
      std::snprintf(line, sizeof(line), "%d,%.9g,%.9g,%.17g,%.17g\n", row.ns, row.time_mean,
                    row.time_std, row.score_mean, row.score_std);
      csv += line;
    }
    write_text(out_dir + "/ns_sweep.csv", csv);
    write_text(out_dir + "/ns_sweep.json", cells.dump(2) + "\n");
  }
  return rows;
}

AgreementResult sign_agreement_rate(const std::vector<Dag>& probes, const DeltaFn& reference,
                                    const DeltaFn& candidate) {
  AgreementResult out;
  for (const Dag& g : probes) {
    for (const Move& mv : g.legal_moves()) {
      const int ref = sign_of(reference(g, mv));
      if (ref == 0) continue;  // no direction to agree on
      ++out.moves;
      if (sign_of(candidate(g, mv)) == ref) ++out.agreeing;
    }
  }
  out.rate = out.moves > 0 ? static_cast<double>(out.agreeing) / static_cast<double>(out.moves)
                           : 1.0;
  return out;
}

AgreementResult gradient_agreement(const Dataset& d, const GpModel& model, double ess,
                                   std::uint64_t seed, int probe_count) {
  if (model.nodes() != d.n())
    throw InvalidArgument("gradient_agreement: model and dataset disagree on variable count");
  std::vector<Dag> probes;
  probes.emplace_back(d.n());
  Rng rng(seed);
  const double p = std::min(0.5, 4.0 / static_cast<double>(d.n()));
  for (int i = 0; i < probe_count; ++i) probes.push_back(sample_random_dag(d.n(), p, rng));

  CountsCache cache(d);
  const BdeParams params{ess};
  DeltaFn exact_delta = [&](const Dag& g, const Move& mv) {
    ScoreLedger ledger = log_bde(g, d, params, cache);
    return delta_log_bde(g, ledger, mv, params, cache);
  };
  GpScorer proxy(model);
  DeltaFn proxy_delta = [&](const Dag& g, const Move& mv) { return proxy.delta(g, mv); };
  return sign_agreement_rate(probes, exact_delta, proxy_delta);
}

void write_sweep_outputs(const SweepFit& fit, SweepPattern pattern, double lambda,
                         const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::string csv = "N,delta\n";
  char line[128];
  for (const auto& [n, delta] : fit.points) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g\n", n, delta);
    csv += line;
  }
  write_text(out_dir + "/sweep.csv", csv);

  nlohmann::ordered_json summary;
  summary["slope"] = fit.slope;
  summary["intercept"] = fit.intercept;
  summary["r2"] = fit.r2;
  summary["pattern"] = to_string(pattern);
  summary["lambda"] = lambda;
  write_text(out_dir + "/summary.json", summary.dump(2) + "\n");
}

}  // namespace bnp
