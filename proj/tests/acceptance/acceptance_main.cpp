// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// the measured quantities; the process exits nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "bnp/bench.hpp"
#include "bnp/common.hpp"
#include "bnp/proxy.hpp"
#include "bnp/scoring.hpp"
#include "bnp/search.hpp"
#include "bnp/smoothlab.hpp"
#include "support/oracles.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void run_criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome.pass = false;
    outcome.detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] C%d %s: %s\n", outcome.pass ? "PASS" : "FAIL", id, name.c_str(),
              outcome.detail.c_str());
  std::fflush(stdout);
  if (!outcome.pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return buffer;
}

std::string temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "bnp_acceptance";
  std::filesystem::create_directories(dir);
  return dir.string();
}

// Shared random suite for criteria 1 and 2.
struct SuitePair {
  bnp::Dataset data;
  bnp::Dag graph;
};

std::vector<SuitePair> random_suite(int count) {
  std::vector<SuitePair> suite;
  suite.reserve(static_cast<std::size_t>(count));
  bnp::Rng rng(20260810);
  for (int i = 0; i < count; ++i) {
    const int n = 2 + static_cast<int>(rng.below(3));  // 2..4
    const int m = 1 + static_cast<int>(rng.below(8));  // 1..8
    bnp::Dataset d = oracle::random_dataset(rng, n, m, 3);
    bnp::Dag g = bnp::sample_random_dag(n, 0.4, rng);
    suite.push_back({std::move(d), std::move(g)});
  }
  return suite;
}

Outcome criterion_bde_oracle() {
  const auto t0 = Clock::now();
  const auto suite = random_suite(1000);
  double worst = 0.0;
  for (const auto& [d, g] : suite) {
    const double ess = 1.0;
    bnp::CountsCache cache(d);
    const double got = bnp::log_bde(g, d, bnp::BdeParams{ess}, cache).total;
    const double want = oracle::prequential_log_bde(d, g, ess);
    worst = std::max(worst, std::abs(got - want));
  }
  const double elapsed = seconds_since(t0);
  const bool pass = worst <= 1e-9 && elapsed < 10.0;
  return {pass, fmt("max |log_bde - prequential| = %.3e over 1000 pairs (%.2f s)", worst, elapsed)};
}

Outcome criterion_incremental() {
  const auto suite = random_suite(1000);
  double worst = 0.0;
  long long moves = 0;
  for (const auto& [d, g] : suite) {
    bnp::CountsCache cache(d);
    const bnp::BdeParams p{1.0};
    const auto ledger = bnp::log_bde(g, d, p, cache);
    for (const bnp::Move& mv : g.legal_moves()) {
      const double delta = bnp::delta_log_bde(g, ledger, mv, p, cache);
      const double full = bnp::log_bde(g.with_move(mv), d, p, cache).total - ledger.total;
      worst = std::max(worst, std::abs(delta - full));
      ++moves;
    }
  }
  return {worst <= 1e-9, fmt("max |delta - full rescore| = %.3e over %lld moves", worst, moves)};
}

Outcome criterion_known_value() {
  const bnp::Dataset d({{0, 1}}, {2}, {"x"});
  const auto fc = bnp::family_counts(d, bnp::Family(0, {}));
  const double got = bnp::family_log_bde(fc, bnp::BdeParams{1.0});
  const double want = std::log(1.0 / 8.0);
  const double err = std::abs(got - want);
  return {err <= 1e-12, fmt("|score - ln(1/8)| = %.3e", err)};
}

Outcome criterion_interpolation() {
  bnp::Rng rng(4251);
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const bnp::Dataset d = oracle::random_dataset(rng, 6, 80, 2);
    bnp::BdeScorer scorer(d, bnp::BdeParams{1.0});
    const int ns = 2 + static_cast<int>(rng.below(14));  // up to 15
    bnp::GpTrainSet train;
    train.n = 6;
    train.scores.resize(ns);
    for (int i = 0; i < ns; ++i) {
      const bnp::Dag g = bnp::sample_random_dag(6, 0.4, rng);
      train.graphs.push_back(bnp::EdgeIndicator::from_dag(g));
      train.scores(i) = scorer.score_graph(g);
    }
    const bnp::GpModel model =
        bnp::GpModel::fit(train, bnp::KernelWeights::ones(bnp::EdgeIndicator::length(6)));
    const Eigen::VectorXd fitted = model.predict_batch(train.graphs);
    const double range =
        std::max(train.scores.maxCoeff() - train.scores.minCoeff(), 1e-12);
    const double err = (fitted - train.scores).cwiseAbs().maxCoeff();
    worst_ratio = std::max(worst_ratio, err / range);
  }
  return {worst_ratio <= 1e-6,
          fmt("max interpolation error = %.3e of the score range (20 sets)", worst_ratio)};
}

Outcome criterion_gradient() {
  bnp::Rng rng(5317);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(3));  // 4..6
    const int ns = 2 + static_cast<int>(rng.below(9)); // 2..10
    const bnp::Dataset d = oracle::random_dataset(rng, n, 40, 2);
    bnp::BdeScorer scorer(d, bnp::BdeParams{1.0});
    bnp::GpTrainSet train;
    train.n = n;
    train.scores.resize(ns);
    for (int i = 0; i < ns; ++i) {
      const bnp::Dag g = bnp::sample_random_dag(n, 0.4, rng);
      train.graphs.push_back(bnp::EdgeIndicator::from_dag(g));
      train.scores(i) = scorer.score_graph(g);
    }
    bnp::KernelWeights w = bnp::KernelWeights::ones(bnp::EdgeIndicator::length(n));
    for (Eigen::Index e = 0; e < w.w.size(); ++e) w.w(e) = 0.5 + rng.uniform01();
    const double jitter = 1e-6;
    const Eigen::VectorXd analytic = bnp::lml_gradient(train, w, jitter);
    const Eigen::VectorXd fd = oracle::fd_lml_gradient(train, w, jitter);
    for (Eigen::Index e = 0; e < analytic.size(); ++e) {
      const double scale = std::max({std::abs(analytic(e)), std::abs(fd(e)), 1e-8});
      worst_rel = std::max(worst_rel, std::abs(analytic(e) - fd(e)) / scale);
    }
  }

  // Non-decreasing accepted-evidence sequence: growing iteration budgets of
  // the same deterministic ascent expose the accepted values one by one.
  bnp::Rng rng2(77);
  const bnp::Dataset d = oracle::random_dataset(rng2, 5, 50, 2);
  bnp::BdeScorer scorer(d, bnp::BdeParams{1.0});
  bnp::GpTrainSet train;
  train.n = 5;
  train.scores.resize(8);
  for (int i = 0; i < 8; ++i) {
    const bnp::Dag g = bnp::sample_random_dag(5, 0.4, rng2);
    train.graphs.push_back(bnp::EdgeIndicator::from_dag(g));
    train.scores(i) = scorer.score_graph(g);
  }
  const bnp::KernelWeights init = bnp::KernelWeights::ones(bnp::EdgeIndicator::length(5));
  const double jitter = 1e-8;
  bool monotone = true;
  double prev = bnp::log_marginal_likelihood(train, init, jitter);
  for (int budget = 1; budget <= 32; ++budget) {
    const double lml = bnp::tune_weights(train, init, jitter, budget, 1e-12).lml;
    if (lml < prev - 1e-12) monotone = false;
    prev = lml;
  }

  const bool pass = worst_rel < 1e-4 && monotone;
  return {pass, fmt("max relative gradient error = %.3e over 50 instances; accepted-lml sequence "
                    "%s", worst_rel, monotone ? "non-decreasing" : "NOT monotone")};
}

Outcome criterion_stationarity() {
  double worst = 0.0;
  for (const double lambda : {0.5, 1.0, 4.0}) {
    for (const double n : {4.0, 40.0, 400.0}) {
      const bnp::SmoothnessCase c(lambda, {n / 4, n / 4, n / 4, n / 4});
      for (const double r : bnp::stationarity_system_residual(c))
        worst = std::max(worst, std::abs(r));
    }
  }
  return {worst < 1e-10,
          fmt("max |pairwise-difference residual| = %.3e at uniform quads (9 cases)", worst)};
}

Outcome criterion_lipschitz_sweep() {
  const auto t0 = Clock::now();
  std::vector<double> grid;
  for (int k = 6; k <= 16; ++k) grid.push_back(std::pow(2.0, k));

  const bnp::SweepFit uniform = bnp::lipschitz_sweep(bnp::SweepPattern::uniform, 1.0, grid);
  bool uniform_positive = true;
  for (const auto& [n, delta] : uniform.points) uniform_positive &= delta > 0.0;

  const bnp::SweepFit corr = bnp::lipschitz_sweep(bnp::SweepPattern::correspondence, 1.0, grid);
  bool corr_negative =
      bnp::case_delta({bnp::SmoothnessCase(1.0, {1, 0, 0, 1})}, 0) < 0.0;  // N = 2
  for (const auto& [n, delta] : corr.points) corr_negative &= delta < 0.0;

  const double elapsed = seconds_since(t0);
  const bool pass = uniform.r2 >= 0.999 && corr.r2 >= 0.999 && uniform_positive &&
                    corr_negative && elapsed < 5.0;
  return {pass,
          fmt("uniform R2 = %.6f (slope %.3f), correspondence R2 = %.6f (slope %.1f); signs "
              "uniform>0:%s corr<0:%s (%.2f s)",
              uniform.r2, uniform.slope, corr.r2, corr.slope, uniform_positive ? "yes" : "no",
              corr_negative ? "yes" : "no", elapsed)};
}

Outcome criterion_cross_module() {
  bnp::Rng rng(6007);
  double worst = 0.0;
  int cases = 0;
  for (const int parent_count : {0, 1, 2}) {
    for (int trial = 0; trial < 15; ++trial) {
      const double ess = std::array<double, 3>{0.5, 1.0, 4.0}[static_cast<std::size_t>(trial % 3)];
      const double lambda = ess / static_cast<double>(1 << parent_count);
      const int n = 2 + parent_count;

      std::vector<bnp::SmoothnessCase> configs;
      std::vector<std::vector<std::int32_t>> cols(static_cast<std::size_t>(n));
      for (int j = 0; j < (1 << parent_count); ++j) {
        std::array<double, 4> q{};
        for (auto& v : q) v = static_cast<double>(rng.below(7));
        if (q[0] + q[1] + q[2] + q[3] == 0) q[0] = 1;
        configs.emplace_back(lambda, q);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < static_cast<int>(q[static_cast<std::size_t>(a * 2 + b)]); ++c) {
              cols[0].push_back(b);
              cols[1].push_back(a);
              for (int t = 0; t < parent_count; ++t)
                cols[static_cast<std::size_t>(2 + t)].push_back((j >> t) & 1 ? 1 : 0);
            }
      }
      std::vector<std::string> names;
      for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
      const bnp::Dataset d(std::move(cols), std::vector<int>(static_cast<std::size_t>(n), 2),
                           std::move(names));
      bnp::Dag g(n);
      for (int t = 0; t < parent_count; ++t) g.add_edge(2 + t, 0);
      bnp::CountsCache cache(d);
      const bnp::BdeParams params{ess};
      const auto ledger = bnp::log_bde(g, d, params, cache);
      const double scorer_delta =
          bnp::delta_log_bde(g, ledger, {bnp::Move::Kind::add, 1, 0}, params, cache);
      const double lab_delta = bnp::case_delta(configs, parent_count);
      worst = std::max(worst, std::abs(lab_delta + scorer_delta));
      ++cases;
    }
  }
  return {worst <= 1e-9,
          fmt("max |case_delta + delta_log_bde| = %.3e over %d constructed datasets", worst, cases)};
}

Outcome criterion_structure_recovery() {
  const auto t0 = Clock::now();
  bnp::Rng rng(88001);
  const auto net = oracle::random_chain_net(rng, 8, 3);
  const bnp::Dataset d = oracle::forward_sample(net, 5000, rng);

  bnp::BdeScorer scorer(d, bnp::BdeParams{1.0});
  const double generator_score = scorer.score_graph(net.graph);

  bnp::BdeScorer search_scorer(d, bnp::BdeParams{1.0});
  const auto [final_graph, traj] = bnp::greedy_search(bnp::Dag(8), search_scorer);

  bool monotone = true;
  double prev = traj.start_score;
  for (const auto& step : traj.steps) {
    if (!(step.driving_score > prev)) monotone = false;
    prev = step.driving_score;
  }
  const double elapsed = seconds_since(t0);
  const bool pass =
      traj.final_score >= generator_score - 1.0 && monotone && elapsed < 60.0;
  return {pass, fmt("greedy %.3f vs generator %.3f (slack %.3f nats), trajectory %s, %zu steps "
                    "(%.1f s)",
                    traj.final_score, generator_score, traj.final_score - generator_score,
                    monotone ? "strictly monotone" : "NOT monotone", traj.steps.size(), elapsed)};
}

Outcome criterion_proxy_speed() {
  const auto t0 = Clock::now();
  bnp::Rng rng(424242);
  const auto net = oracle::random_chain_net(rng, 15, 10);
  const bnp::Dataset d = oracle::forward_sample(net, 30000, rng);
  const std::string csv = temp_dir() + "/speed_n15_m30000.csv";
  d.save_csv(csv);

  bnp::BenchConfig cfg;
  cfg.data_path = csv;
  cfg.mode = "both";
  cfg.ns = 250;
  cfg.repeats = 5;
  cfg.seed = 1;
  const bnp::BenchResult res = bnp::run_benchmark(cfg, temp_dir() + "/speed_out");

  const auto& exact = res.modes.at("exact");
  const auto& proxy = res.modes.at("proxy");
  for (const auto& rr : exact.repeats)
    if (!rr.error.empty()) return {false, "exact repeat failed: " + rr.error};
  for (const auto& rr : proxy.repeats)
    if (!rr.error.empty()) return {false, "proxy repeat failed: " + rr.error};

  const double time_ok = proxy.time_s.median < exact.time_s.median;
  const double score_floor = exact.score.median - 0.05 * std::abs(exact.score.median);
  const bool score_ok = proxy.score.median >= score_floor;
  const double elapsed = seconds_since(t0);
  const bool pass = time_ok && score_ok && elapsed < 900.0;
  return {pass,
          fmt("median time proxy %.2fs vs exact %.2fs; median exact-score proxy %.1f vs floor "
              "%.1f (exact %.1f); total %.1f s",
              proxy.time_s.median, exact.time_s.median, proxy.score.median, score_floor,
              exact.score.median, elapsed)};
}

Outcome criterion_gradient_agreement() {
  bnp::Rng rng(300001);
  const auto net = oracle::random_chain_net(rng, 6, 2);
  const bnp::Dataset d = oracle::forward_sample(net, 500, rng);

  // Self-test wirings.
  bnp::CountsCache cache(d);
  const bnp::BdeParams p{1.0};
  const bnp::DeltaFn exact_delta = [&](const bnp::Dag& g, const bnp::Move& mv) {
    const auto ledger = bnp::log_bde(g, d, p, cache);
    return bnp::delta_log_bde(g, ledger, mv, p, cache);
  };
  const bnp::DeltaFn negated = [&](const bnp::Dag& g, const bnp::Move& mv) {
    return -exact_delta(g, mv);
  };
  std::vector<bnp::Dag> probes{bnp::Dag(6)};
  bnp::Rng probe_rng(2);
  probes.push_back(bnp::sample_random_dag(6, 0.4, probe_rng));
  const double same = bnp::sign_agreement_rate(probes, exact_delta, exact_delta).rate;
  const double flipped = bnp::sign_agreement_rate(probes, exact_delta, negated).rate;

  // End-to-end trained proxy.
  bnp::BdeScorer scorer(d, bnp::BdeParams{1.0});
  bnp::GpTrainSet train;
  train.n = 6;
  train.scores.resize(50);
  bnp::Rng sample_rng(5);
  for (int i = 0; i < 50; ++i) {
    const bnp::Dag g = bnp::sample_random_dag(6, 0.4, sample_rng);
    train.graphs.push_back(bnp::EdgeIndicator::from_dag(g));
    train.scores(i) = scorer.score_graph(g);
  }
  const bnp::TuneResult tuned =
      bnp::tune_weights(train, bnp::KernelWeights::ones(bnp::EdgeIndicator::length(6)));
  const bnp::GpModel model = bnp::GpModel::fit(train, tuned.weights);
  const bnp::AgreementResult trained = bnp::gradient_agreement(d, model, 1.0, 9, 5);

  const bool pass = same == 1.0 && flipped == 0.0 && trained.moves > 0 &&
                    trained.rate >= 0.0 && trained.rate <= 1.0;
  return {pass, fmt("self-tests %.1f/%.1f; trained proxy rate %.3f over %lld moves", same,
                    flipped, trained.rate, static_cast<long long>(trained.moves))};
}

}  // namespace

int main() {
  std::printf("acceptance suite\n================\n");
  run_criterion(1, "bde-oracle-equivalence", criterion_bde_oracle);
  run_criterion(2, "incremental-delta-correctness", criterion_incremental);
  run_criterion(3, "known-value-single-binary-node", criterion_known_value);
  run_criterion(4, "kriging-interpolation", criterion_interpolation);
  run_criterion(5, "evidence-gradient-and-ascent", criterion_gradient);
  run_criterion(6, "uniform-quad-stationarity", criterion_stationarity);
  run_criterion(7, "log-sweep-fits-and-signs", criterion_lipschitz_sweep);
  run_criterion(8, "lab-vs-scorer-cross-check", criterion_cross_module);
  run_criterion(9, "structure-recovery", criterion_structure_recovery);
  run_criterion(10, "proxy-speed-direction", criterion_proxy_speed);
  run_criterion(11, "gradient-agreement-metric", criterion_gradient_agreement);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
