// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared-library surface the CLI is built on.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "bnproxy.h"

namespace {

namespace fs = std::filesystem;

std::string test_dir() {
  const auto dir = fs::temp_directory_path() / "bnp_capi_tests";
  fs::create_directories(dir);
  return dir.string();
}

std::string write_file(const std::string& name, const std::string& content) {
  const std::string path = test_dir() + "/" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

// Two strongly coupled binary columns plus a noise-free copy: enough signal
// for every stage of the pipeline.
std::string sample_csv() {
  std::string body = "a,b,c\n";
  for (int i = 0; i < 200; ++i) {
    const int a = i % 2;
    const int b = (i % 8 == 3) ? 1 - a : a;
    const int c = (i / 2) % 2;
    body += std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "\n";
  }
  return write_file("pipeline.csv", body);
}

}  // namespace

TEST_CASE("dataset loading, metadata, and marginals") {
  bnp_dataset* d = nullptr;
  REQUIRE(bnp_dataset_load_csv(sample_csv().c_str(), nullptr, &d) == BNP_OK);
  CHECK(bnp_dataset_rows(d) == 200);
  CHECK(bnp_dataset_cols(d) == 3);
  CHECK(bnp_dataset_arity(d, 0) == 2);
  CHECK(std::string(bnp_dataset_name(d, 1)) == "b");

  int64_t counts[2] = {0, 0};
  REQUIRE(bnp_dataset_column_marginal(d, 0, counts, 2) == BNP_OK);
  CHECK(counts[0] + counts[1] == 200);
  CHECK(bnp_dataset_column_marginal(d, 0, counts, 1) == BNP_ERR_INVALID);
  bnp_dataset_free(d);
}

TEST_CASE("missing files produce an IO status and a message") {
  bnp_dataset* d = nullptr;
  CHECK(bnp_dataset_load_csv("/nonexistent/x.csv", nullptr, &d) == BNP_ERR_IO);
  CHECK(std::string(bnp_last_error()).find("x.csv") != std::string::npos);
  CHECK(bnp_dataset_load_csv(nullptr, nullptr, &d) == BNP_ERR_INVALID);
}

TEST_CASE("arity sidecar flows through") {
  const std::string csv = write_file("sidecar.csv", "a\n0\n1\n");
  const std::string sidecar = write_file("sidecar.json", "{\"a\": 3}");
  bnp_dataset* d = nullptr;
  REQUIRE(bnp_dataset_load_csv(csv.c_str(), sidecar.c_str(), &d) == BNP_OK);
  CHECK(bnp_dataset_arity(d, 0) == 3);
  bnp_dataset_free(d);
}

TEST_CASE("graph construction, cycles, and json io") {
  bnp_graph* g = nullptr;
  REQUIRE(bnp_graph_create(3, &g) == BNP_OK);
  CHECK(bnp_graph_add_edge(g, 0, 1) == BNP_OK);
  CHECK(bnp_graph_add_edge(g, 1, 2) == BNP_OK);
  CHECK(bnp_graph_add_edge(g, 2, 0) == BNP_ERR_INVALID);  // closes a cycle
  CHECK(bnp_graph_edge_count(g) == 2);

  const std::string path = test_dir() + "/graph.json";
  REQUIRE(bnp_graph_save_json(g, path.c_str()) == BNP_OK);
  bnp_graph* back = nullptr;
  REQUIRE(bnp_graph_load_json(path.c_str(), &back) == BNP_OK);
  CHECK(bnp_graph_nodes(back) == 3);
  CHECK(bnp_graph_edge_count(back) == 2);
  bnp_graph_free(back);
  bnp_graph_free(g);

  bnp_graph* bad = nullptr;
  const std::string cyclic = write_file("cyclic.json", "{\"n\":2,\"edges\":[[0,1],[1,0]]}");
  CHECK(bnp_graph_load_json(cyclic.c_str(), &bad) == BNP_ERR_INVALID);
}

TEST_CASE("scores flow through the C surface") {
  bnp_dataset* d = nullptr;
  REQUIRE(bnp_dataset_load_csv(sample_csv().c_str(), nullptr, &d) == BNP_OK);
  bnp_graph* empty = nullptr;
  REQUIRE(bnp_graph_create(3, &empty) == BNP_OK);
  bnp_graph* chain = nullptr;
  REQUIRE(bnp_graph_create(3, &chain) == BNP_OK);
  REQUIRE(bnp_graph_add_edge(chain, 0, 1) == BNP_OK);

  double empty_bde = 0, chain_bde = 0, empty_bic = 0;
  REQUIRE(bnp_score_bde(d, empty, 1.0, &empty_bde) == BNP_OK);
  REQUIRE(bnp_score_bde(d, chain, 1.0, &chain_bde) == BNP_OK);
  REQUIRE(bnp_score_bic(d, empty, &empty_bic) == BNP_OK);
  CHECK(chain_bde > empty_bde);  // a and b are nearly copies
  CHECK(std::isfinite(empty_bic));
  CHECK(bnp_score_bde(d, chain, -1.0, &chain_bde) == BNP_ERR_INVALID);  // bad ess

  bnp_graph* wrong = nullptr;
  REQUIRE(bnp_graph_create(2, &wrong) == BNP_OK);
  CHECK(bnp_score_bde(d, wrong, 1.0, &chain_bde) == BNP_ERR_INVALID);
  bnp_graph_free(wrong);
  bnp_graph_free(chain);
  bnp_graph_free(empty);
  bnp_dataset_free(d);
}

TEST_CASE("proxy training, persistence, prediction, search, agreement") {
  bnp_dataset* d = nullptr;
  REQUIRE(bnp_dataset_load_csv(sample_csv().c_str(), nullptr, &d) == BNP_OK);

  bnp_model* m = nullptr;
  REQUIRE(bnp_model_train(d, 25, -1.0, 7, 1.0, &m) == BNP_OK);

  const std::string model_path = test_dir() + "/model.json";
  REQUIRE(bnp_model_save_json(m, model_path.c_str()) == BNP_OK);
  bnp_model* loaded = nullptr;
  REQUIRE(bnp_model_load_json(model_path.c_str(), &loaded) == BNP_OK);

  bnp_graph* probe = nullptr;
  REQUIRE(bnp_graph_create(3, &probe) == BNP_OK);
  REQUIRE(bnp_graph_add_edge(probe, 0, 1) == BNP_OK);
  double p1 = 0, p2 = 0;
  REQUIRE(bnp_model_predict(m, probe, &p1) == BNP_OK);
  REQUIRE(bnp_model_predict(loaded, probe, &p2) == BNP_OK);
  CHECK(p1 == doctest::Approx(p2).epsilon(1e-12));

  // exact search
  const std::string exact_dir = test_dir() + "/search_exact";
  fs::remove_all(exact_dir);
  bnp_graph* exact_final = nullptr;
  double exact_score = 0;
  REQUIRE(bnp_search_greedy(d, "exact", nullptr, 1.0, 0, -1, 0, exact_dir.c_str(), &exact_final,
                            &exact_score) == BNP_OK);
  CHECK(fs::exists(exact_dir + "/trajectory.csv"));
  CHECK(fs::exists(exact_dir + "/final_graph.json"));
  CHECK(fs::exists(exact_dir + "/search.json"));
  CHECK(bnp_graph_edge_count(exact_final) >= 1);

  // proxy search needs a model
  double proxy_score = 0;
  CHECK(bnp_search_greedy(d, "proxy", nullptr, 1.0, 0, -1, 0, nullptr, nullptr, &proxy_score) ==
        BNP_ERR_INVALID);
  REQUIRE(bnp_search_greedy(d, "proxy", m, 1.0, 0, -1, 0, nullptr, nullptr, &proxy_score) ==
          BNP_OK);
  CHECK(std::isfinite(proxy_score));
  CHECK(bnp_search_greedy(d, "simulated-annealing", nullptr, 1.0, 0, -1, 0, nullptr, nullptr,
                          &proxy_score) == BNP_ERR_INVALID);

  double rate = 0;
  int64_t moves = 0;
  REQUIRE(bnp_gradient_agreement(d, m, 1.0, 3, 3, &rate, &moves) == BNP_OK);
  CHECK(rate >= 0.0);
  CHECK(rate <= 1.0);
  CHECK(moves > 0);

  bnp_graph_free(exact_final);
  bnp_graph_free(probe);
  bnp_model_free(loaded);
  bnp_model_free(m);
  bnp_dataset_free(d);
}

TEST_CASE("smoothness sweep through the C surface") {
  const double grid[] = {64, 128, 256, 512, 1024, 2048};
  const std::string out = test_dir() + "/smooth";
  fs::remove_all(out);
  double slope = 0, intercept = 0, r2 = 0;
  REQUIRE(bnp_smooth_sweep("uniform", 1.0, grid, 6, out.c_str(), &slope, &intercept, &r2) ==
          BNP_OK);
  CHECK(r2 > 0.999);
  CHECK(fs::exists(out + "/sweep.csv"));
  CHECK(fs::exists(out + "/summary.json"));
  CHECK(bnp_smooth_sweep("spiral", 1.0, grid, 6, nullptr, &slope, &intercept, &r2) ==
        BNP_ERR_INVALID);
}

TEST_CASE("bench and ns-sweep from a config file") {
  const std::string csv = sample_csv();
  const std::string cfg = write_file(
      "bench_cfg.json",
      "{\"data\": \"" + csv + "\", \"mode\": \"both\", \"ns\": 8, \"repeats\": 1, \"seed\": 5}");
  const std::string out = test_dir() + "/bench";
  fs::remove_all(out);
  REQUIRE(bnp_bench_run(cfg.c_str(), out.c_str()) == BNP_OK);
  CHECK(fs::exists(out + "/result.json"));

  const int ns_values[] = {4, 8};
  const std::string sweep_out = test_dir() + "/bench_sweep";
  fs::remove_all(sweep_out);
  REQUIRE(bnp_bench_ns_sweep(cfg.c_str(), ns_values, 2, sweep_out.c_str()) == BNP_OK);
  CHECK(fs::exists(sweep_out + "/ns_sweep.csv"));

  CHECK(bnp_bench_run("/nonexistent/cfg.json", out.c_str()) == BNP_ERR_IO);
  const std::string bad = write_file("bad_cfg.json", "{\"mode\": \"exact\"}");
  CHECK(bnp_bench_run(bad.c_str(), out.c_str()) == BNP_ERR_PARSE);
}

TEST_CASE("version string is present") {
  CHECK(std::string(bnp_version()).find('.') != std::string::npos);
}
