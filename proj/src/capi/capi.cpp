// SPDX-License-Identifier: Apache-2.0
#include "bnproxy.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "bnp/bench.hpp"
#include "bnp/common.hpp"
#include "bnp/counts.hpp"
#include "bnp/dag.hpp"
#include "bnp/dataset.hpp"
#include "bnp/proxy.hpp"
#include "bnp/scoring.hpp"
#include "bnp/search.hpp"
#include "bnp/smoothlab.hpp"

struct bnp_dataset {
  bnp::Dataset rep;
};
struct bnp_graph {
  bnp::Dag rep;
};
struct bnp_model {
  bnp::GpModel rep;
};

namespace {

thread_local std::string g_last_error = "";

bnp_status fail(bnp_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
bnp_status guarded(Fn&& fn) {
  try {
    fn();
    return BNP_OK;
  } catch (const bnp::IoError& e) {
    return fail(BNP_ERR_IO, e.what());
  } catch (const bnp::ParseError& e) {
    return fail(BNP_ERR_PARSE, e.what());
  } catch (const bnp::InvalidArgument& e) {
    return fail(BNP_ERR_INVALID, e.what());
  } catch (const bnp::NumericError& e) {
    return fail(BNP_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(BNP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BNP_ERR_INTERNAL, "unknown error");
  }
}

bnp_status require(bool ok, const char* what) {
  return ok ? BNP_OK : fail(BNP_ERR_INVALID, what);
}

}  // namespace

extern "C" {

const char* bnp_version(void) { return "0.1.0"; }

const char* bnp_last_error(void) { return g_last_error.c_str(); }

/* ---- datasets ------------------------------------------------------- */

bnp_status bnp_dataset_load_csv(const char* csv_path, const char* arity_json_path,
                                bnp_dataset** out) {
  if (bnp_status s = require(csv_path && out, "bnp_dataset_load_csv: NULL argument")) return s;
  return guarded([&] {
    bnp::Dataset d = arity_json_path
                         ? bnp::Dataset::load_csv_with_sidecar(csv_path, arity_json_path)
                         : bnp::Dataset::load_csv(csv_path);
    *out = new bnp_dataset{std::move(d)};
  });
}

void bnp_dataset_free(bnp_dataset* d) { delete d; }

int64_t bnp_dataset_rows(const bnp_dataset* d) { return d ? d->rep.m() : -1; }

int bnp_dataset_cols(const bnp_dataset* d) { return d ? d->rep.n() : -1; }

int bnp_dataset_arity(const bnp_dataset* d, int col) {
  if (!d || col < 0 || col >= d->rep.n()) return -1;
  return d->rep.arity(col);
}

const char* bnp_dataset_name(const bnp_dataset* d, int col) {
  if (!d || col < 0 || col >= d->rep.n()) return nullptr;
  return d->rep.name(col).c_str();
}

bnp_status bnp_dataset_column_marginal(const bnp_dataset* d, int col, int64_t* out_counts,
                                       int capacity) {
  if (bnp_status s = require(d && out_counts, "bnp_dataset_column_marginal: NULL argument"))
    return s;
  return guarded([&] {
    const auto counts = d->rep.column_marginal(col);
    if (static_cast<std::size_t>(capacity) < counts.size())
      throw bnp::InvalidArgument("bnp_dataset_column_marginal: capacity below column arity");
    std::memcpy(out_counts, counts.data(), counts.size() * sizeof(int64_t));
  });
}

/* ---- graphs --------------------------------------------------------- */

bnp_status bnp_graph_create(int n, bnp_graph** out) {
  if (bnp_status s = require(out != nullptr, "bnp_graph_create: NULL output")) return s;
  return guarded([&] { *out = new bnp_graph{bnp::Dag(n)}; });
}

bnp_status bnp_graph_load_json(const char* path, bnp_graph** out) {
  if (bnp_status s = require(path && out, "bnp_graph_load_json: NULL argument")) return s;
  return guarded([&] { *out = new bnp_graph{bnp::Dag::from_json_file(path)}; });
}

bnp_status bnp_graph_save_json(const bnp_graph* g, const char* path) {
  if (bnp_status s = require(g && path, "bnp_graph_save_json: NULL argument")) return s;
  return guarded([&] { g->rep.to_json_file(path); });
}

void bnp_graph_free(bnp_graph* g) { delete g; }

int bnp_graph_nodes(const bnp_graph* g) { return g ? g->rep.node_count() : -1; }

int bnp_graph_edge_count(const bnp_graph* g) { return g ? g->rep.edge_count() : -1; }

bnp_status bnp_graph_add_edge(bnp_graph* g, int u, int v) {
  if (bnp_status s = require(g != nullptr, "bnp_graph_add_edge: NULL graph")) return s;
  return guarded([&] { g->rep.add_edge(u, v); });
}

/* ---- exact scores --------------------------------------------------- */

bnp_status bnp_score_bde(const bnp_dataset* d, const bnp_graph* g, double ess, double* out) {
  if (bnp_status s = require(d && g && out, "bnp_score_bde: NULL argument")) return s;
  return guarded([&] {
    bnp::CountsCache cache(d->rep);
    *out = bnp::log_bde(g->rep, d->rep, bnp::BdeParams{ess}, cache).total;
  });
}

bnp_status bnp_score_bic(const bnp_dataset* d, const bnp_graph* g, double* out) {
  if (bnp_status s = require(d && g && out, "bnp_score_bic: NULL argument")) return s;
  return guarded([&] { *out = bnp::log_bic(g->rep, d->rep); });
}

/* ---- proxy ----------------------------------------------------------- */

bnp_status bnp_model_train(const bnp_dataset* d, int ns, double p, uint64_t seed, double ess,
                           bnp_model** out) {
  if (bnp_status s = require(d && out, "bnp_model_train: NULL argument")) return s;
  return guarded([&] {
    if (ns < 1) throw bnp::InvalidArgument("bnp_model_train: ns must be >= 1");
    const int n = d->rep.n();
    const double edge_prob = p >= 0.0 ? p : std::min(0.5, 4.0 / static_cast<double>(n));
    bnp::Rng rng(seed);
    std::vector<bnp::Dag> samples;
    samples.reserve(static_cast<std::size_t>(ns));
    for (int i = 0; i < ns; ++i) samples.push_back(bnp::sample_random_dag(n, edge_prob, rng));

    bnp::BdeScorer exact(d->rep, bnp::BdeParams{ess});
    bnp::GpTrainSet train;
    train.n = n;
    train.graphs.resize(samples.size());
    train.scores.resize(static_cast<Eigen::Index>(samples.size()));
    bnp::parallel_for(samples.size(), [&](std::size_t i) {
      train.graphs[i] = bnp::EdgeIndicator::from_dag(samples[i]);
      train.scores(static_cast<Eigen::Index>(i)) = exact.score_graph(samples[i]);
    });

    bnp::TuneResult tuned = bnp::tune_weights(
        train, bnp::KernelWeights::ones(bnp::EdgeIndicator::length(n)));
    *out = new bnp_model{bnp::GpModel::fit(train, std::move(tuned.weights))};
  });
}

bnp_status bnp_model_save_json(const bnp_model* m, const char* path) {
  if (bnp_status s = require(m && path, "bnp_model_save_json: NULL argument")) return s;
  return guarded([&] { m->rep.save_json(path); });
}

bnp_status bnp_model_load_json(const char* path, bnp_model** out) {
  if (bnp_status s = require(path && out, "bnp_model_load_json: NULL argument")) return s;
  return guarded([&] { *out = new bnp_model{bnp::GpModel::load_json(path)}; });
}

bnp_status bnp_model_predict(const bnp_model* m, const bnp_graph* g, double* out) {
  if (bnp_status s = require(m && g && out, "bnp_model_predict: NULL argument")) return s;
  return guarded([&] { *out = m->rep.predict(bnp::EdgeIndicator::from_dag(g->rep)); });
}

void bnp_model_free(bnp_model* m) { delete m; }

/* ---- search ---------------------------------------------------------- */

bnp_status bnp_search_greedy(const bnp_dataset* d, const char* mode, const bnp_model* model,
                             double ess, uint64_t seed, int max_steps, int record_exact,
                             const char* out_dir, bnp_graph** out_final, double* out_exact_score) {
  (void)seed;  // reserved for randomized-start variants; the greedy driver is deterministic
  if (bnp_status s = require(d && mode, "bnp_search_greedy: NULL argument")) return s;
  return guarded([&] {
    const std::string mode_s = mode;
    if (mode_s != "exact" && mode_s != "proxy")
      throw bnp::InvalidArgument("bnp_search_greedy: mode must be exact or proxy");
    if (mode_s == "proxy" && !model)
      throw bnp::InvalidArgument("bnp_search_greedy: proxy mode requires a model");

    bnp::BdeScorer exact(d->rep, bnp::BdeParams{ess});
    bnp::GreedyOptions opts;
    opts.max_steps = max_steps;
    if (record_exact)
      opts.exact_eval = [&exact](const bnp::Dag& g) { return exact.score_graph(g); };

    bnp::Dag start(d->rep.n());
    std::pair<bnp::Dag, bnp::SearchTrajectory> run =
        mode_s == "exact" ? bnp::greedy_search(start, exact, opts) : [&] {
          bnp::GpScorer proxy(model->rep);
          return bnp::greedy_search(start, proxy, opts);
        }();

    const double exact_score =
        mode_s == "exact" ? run.second.final_score : exact.score_graph(run.first);

    if (out_dir) {
      std::filesystem::create_directories(out_dir);
      const std::string dir = out_dir;
      run.second.write_csv(dir + "/trajectory.csv");
      run.first.to_json_file(dir + "/final_graph.json");
      nlohmann::ordered_json summary;
      summary["mode"] = mode_s;
      summary["final_exact_score"] = exact_score;
      summary["driving_final_score"] = run.second.final_score;
      summary["steps"] = run.second.steps.size();
      summary["edges"] = run.first.edge_count();
      std::ofstream out(dir + "/search.json");
      if (!out) throw bnp::IoError("cannot write '" + dir + "/search.json'");
      out << summary.dump(2) << "\n";
    }

    if (out_exact_score) *out_exact_score = exact_score;
    if (out_final) *out_final = new bnp_graph{std::move(run.first)};
  });
}

/* ---- smoothness sweeps ----------------------------------------------- */

bnp_status bnp_smooth_sweep(const char* pattern, double lambda, const double* n_grid,
                            size_t n_grid_len, const char* out_dir, double* out_slope,
                            double* out_intercept, double* out_r2) {
  if (bnp_status s = require(pattern && n_grid, "bnp_smooth_sweep: NULL argument")) return s;
  return guarded([&] {
    const bnp::SweepPattern p = bnp::sweep_pattern_from_string(pattern);
    std::vector<double> grid(n_grid, n_grid + n_grid_len);
    const bnp::SweepFit fit = bnp::lipschitz_sweep(p, lambda, grid);
    if (out_dir) bnp::write_sweep_outputs(fit, p, lambda, out_dir);
    if (out_slope) *out_slope = fit.slope;
    if (out_intercept) *out_intercept = fit.intercept;
    if (out_r2) *out_r2 = fit.r2;
  });
}

/* ---- benchmark -------------------------------------------------------- */

bnp_status bnp_bench_run(const char* config_json_path, const char* out_dir) {
  if (bnp_status s = require(config_json_path && out_dir, "bnp_bench_run: NULL argument"))
    return s;
  return guarded([&] {
    const bnp::BenchConfig cfg = bnp::BenchConfig::from_json_file(config_json_path);
    bnp::run_benchmark(cfg, out_dir);
  });
}

bnp_status bnp_bench_ns_sweep(const char* config_json_path, const int* ns_values,
                              size_t ns_values_len, const char* out_dir) {
  if (bnp_status s =
          require(config_json_path && ns_values && out_dir, "bnp_bench_ns_sweep: NULL argument"))
    return s;
  return guarded([&] {
    const bnp::BenchConfig cfg = bnp::BenchConfig::from_json_file(config_json_path);
    std::vector<int> values(ns_values, ns_values + ns_values_len);
    bnp::ns_sweep(cfg, values, out_dir);
  });
}

bnp_status bnp_gradient_agreement(const bnp_dataset* d, const bnp_model* m, double ess,
                                  uint64_t seed, int probe_count, double* out_rate,
                                  int64_t* out_moves) {
  if (bnp_status s = require(d && m && out_rate, "bnp_gradient_agreement: NULL argument"))
    return s;
  return guarded([&] {
    const bnp::AgreementResult res =
        bnp::gradient_agreement(d->rep, m->rep, ess, seed, probe_count);
    *out_rate = res.rate;
    if (out_moves) *out_moves = res.moves;
  });
}

} /* extern "C" */
