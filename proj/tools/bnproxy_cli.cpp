// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Everything goes through the public C API.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bnproxy.h"

namespace {

struct DatasetDeleter {
  void operator()(bnp_dataset* d) const { bnp_dataset_free(d); }
};
struct GraphDeleter {
  void operator()(bnp_graph* g) const { bnp_graph_free(g); }
};
struct ModelDeleter {
  void operator()(bnp_model* m) const { bnp_model_free(m); }
};

using DatasetPtr = std::unique_ptr<bnp_dataset, DatasetDeleter>;
using GraphPtr = std::unique_ptr<bnp_graph, GraphDeleter>;
using ModelPtr = std::unique_ptr<bnp_model, ModelDeleter>;

int check(bnp_status status) {
  if (status == BNP_OK) return 0;
  std::fprintf(stderr, "error: %s\n", bnp_last_error());
  return static_cast<int>(status);
}

DatasetPtr load_dataset(const std::string& data, const std::string& arity_json, int& rc) {
  bnp_dataset* d = nullptr;
  rc = check(bnp_dataset_load_csv(data.c_str(), arity_json.empty() ? nullptr : arity_json.c_str(),
                                  &d));
  return DatasetPtr(d);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian network structure learning with an exact BDe scorer, "
               "a kriging score proxy, and greedy search"};
  app.require_subcommand(1);

  // score
  std::string data, graph_path, arity_json, model_path, out_dir, mode = "exact";
  double ess = 1.0;
  bool use_bic = false;
  auto* score = app.add_subcommand("score", "Score a graph against a dataset");
  score->add_option("--data", data, "dataset CSV")->required();
  score->add_option("--graph", graph_path, "graph JSON {n, edges}")->required();
  score->add_option("--arities", arity_json, "arity sidecar JSON");
  score->add_option("--ess", ess, "equivalent sample size (default 1)");
  score->add_flag("--bic", use_bic, "report BIC instead of log-BDe");

  // train-proxy
  int ns = 50;
  double p = -1.0;
  std::uint64_t seed = 0;
  std::string model_out;
  auto* train = app.add_subcommand("train-proxy", "Sample and score random DAGs, tune and fit the proxy");
  train->add_option("--data", data, "dataset CSV")->required();
  train->add_option("--ns", ns, "number of training samples")->required();
  train->add_option("--p", p, "edge probability (default min(0.5, 4/n))");
  train->add_option("--seed", seed, "RNG seed");
  train->add_option("--ess", ess, "equivalent sample size (default 1)");
  train->add_option("--arities", arity_json, "arity sidecar JSON");
  train->add_option("--out", model_out, "output model JSON")->required();

  // search
  int max_steps = -1;
  bool record_exact = false;
  auto* search = app.add_subcommand("search", "Greedy hill climbing under the exact or proxy scorer");
  search->add_option("--data", data, "dataset CSV")->required();
  search->add_option("--mode", mode, "exact|proxy")->required();
  search->add_option("--model", model_path, "trained model JSON (proxy mode)");
  search->add_option("--seed", seed, "RNG seed");
  search->add_option("--ess", ess, "equivalent sample size (default 1)");
  search->add_option("--max-steps", max_steps, "step budget (default 2n(n-1))");
  search->add_option("--arities", arity_json, "arity sidecar JSON");
  search->add_flag("--record-exact", record_exact, "log the exact score after every step");
  search->add_option("--out", out_dir, "output directory")->required();

  // smooth
  std::string pattern = "uniform", grid_text = "64,128,256,512,1024,2048,4096,8192,16384,32768,65536";
  double lambda = 1.0;
  auto* smooth = app.add_subcommand("smooth", "Extremal score-change sweep over sample size");
  smooth->add_option("--pattern", pattern, "uniform|correspondence")->required();
  smooth->add_option("--lambda", lambda, "per-configuration prior strength (default 1)");
  smooth->add_option("--ngrid", grid_text, "comma-separated sample sizes");
  smooth->add_option("--out", out_dir, "output directory")->required();

  // bench
  std::string config_path;
  auto* bench = app.add_subcommand("bench", "Exact-vs-proxy benchmark from a JSON config");
  bench->add_option("--config", config_path, "benchmark config JSON")->required();
  bench->add_option("--out", out_dir, "output directory")->required();

  // sweep-ns
  std::string ns_list;
  auto* sweep_ns = app.add_subcommand("sweep-ns", "Benchmark across training-sample counts");
  sweep_ns->add_option("--config", config_path, "benchmark config JSON")->required();
  sweep_ns->add_option("--ns-values", ns_list, "comma-separated n_s values")->required();
  sweep_ns->add_option("--out", out_dir, "output directory")->required();

  // gradient-agreement
  int probes = 5;
  auto* agreement = app.add_subcommand("gradient-agreement",
                                       "Sign-agreement rate of proxy vs exact score changes");
  agreement->add_option("--data", data, "dataset CSV")->required();
  agreement->add_option("--model", model_path, "trained model JSON")->required();
  agreement->add_option("--ess", ess, "equivalent sample size (default 1)");
  agreement->add_option("--seed", seed, "RNG seed");
  agreement->add_option("--probes", probes, "number of sampled probe graphs (default 5)");
  agreement->add_option("--arities", arity_json, "arity sidecar JSON");

  CLI11_PARSE(app, argc, argv);

  if (score->parsed()) {
    int rc = 0;
    DatasetPtr d = load_dataset(data, arity_json, rc);
    if (rc) return rc;
    bnp_graph* g = nullptr;
    if ((rc = check(bnp_graph_load_json(graph_path.c_str(), &g)))) return rc;
    GraphPtr graph(g);
    double value = 0.0;
    rc = use_bic ? check(bnp_score_bic(d.get(), graph.get(), &value))
                 : check(bnp_score_bde(d.get(), graph.get(), ess, &value));
    if (rc) return rc;
    std::printf("%.17g\n", value);
    return 0;
  }

  if (train->parsed()) {
    int rc = 0;
    DatasetPtr d = load_dataset(data, arity_json, rc);
    if (rc) return rc;
    bnp_model* m = nullptr;
    if ((rc = check(bnp_model_train(d.get(), ns, p, seed, ess, &m)))) return rc;
    ModelPtr model(m);
    if ((rc = check(bnp_model_save_json(model.get(), model_out.c_str())))) return rc;
    std::printf("model written to %s\n", model_out.c_str());
    return 0;
  }

  if (search->parsed()) {
    int rc = 0;
    DatasetPtr d = load_dataset(data, arity_json, rc);
    if (rc) return rc;
    ModelPtr model;
    if (!model_path.empty()) {
      bnp_model* m = nullptr;
      if ((rc = check(bnp_model_load_json(model_path.c_str(), &m)))) return rc;
      model.reset(m);
    }
    double final_score = 0.0;
    rc = check(bnp_search_greedy(d.get(), mode.c_str(), model.get(), ess, seed, max_steps,
                                 record_exact ? 1 : 0, out_dir.c_str(), nullptr, &final_score));
    if (rc) return rc;
    std::printf("final exact score: %.17g (outputs in %s)\n", final_score, out_dir.c_str());
    return 0;
  }

  if (smooth->parsed()) {
    const std::vector<double> grid = parse_grid(grid_text);
    double slope = 0, intercept = 0, r2 = 0;
    int rc = check(bnp_smooth_sweep(pattern.c_str(), lambda, grid.data(), grid.size(),
                                    out_dir.c_str(), &slope, &intercept, &r2));
    if (rc) return rc;
    std::printf("pattern=%s lambda=%g slope=%.6f intercept=%.6f r2=%.6f (outputs in %s)\n",
                pattern.c_str(), lambda, slope, intercept, r2, out_dir.c_str());
    return 0;
  }

  if (bench->parsed()) {
    int rc = check(bnp_bench_run(config_path.c_str(), out_dir.c_str()));
    if (rc) return rc;
    std::printf("benchmark results in %s\n", out_dir.c_str());
    return 0;
  }

  if (sweep_ns->parsed()) {
    std::vector<int> values;
    for (double v : parse_grid(ns_list)) values.push_back(static_cast<int>(v));
    int rc = check(bnp_bench_ns_sweep(config_path.c_str(), values.data(), values.size(),
                                      out_dir.c_str()));
    if (rc) return rc;
    std::printf("sweep results in %s\n", out_dir.c_str());
    return 0;
  }

  if (agreement->parsed()) {
    int rc = 0;
    DatasetPtr d = load_dataset(data, arity_json, rc);
    if (rc) return rc;
    bnp_model* m = nullptr;
    if ((rc = check(bnp_model_load_json(model_path.c_str(), &m)))) return rc;
    ModelPtr model(m);
    double rate = 0.0;
    int64_t moves = 0;
    rc = check(bnp_gradient_agreement(d.get(), model.get(), ess, seed, probes, &rate, &moves));
    if (rc) return rc;
    std::printf("gradient agreement: %.6f over %" PRId64 " moves\n", rate, moves);
    return 0;
  }

  return 0;
}
