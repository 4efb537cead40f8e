// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "bnp/dag.hpp"
#include "bnp/search.hpp"

namespace bnp {

// Boolean vector over all n(n-1) ordered node pairs in lexicographic order:
// (0,1), (0,2), ..., (0,n-1), (1,0), (1,2), ...
struct EdgeIndicator {
  std::vector<std::uint8_t> bits;

  static std::size_t length(int n) {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1);
  }
  static std::size_t pair_index(int u, int v, int n);
  static EdgeIndicator from_dag(const Dag& g);

  std::size_t size() const { return bits.size(); }
  bool operator==(const EdgeIndicator& other) const { return bits == other.bits; }
};

// Per-possible-edge nonnegative kernel weights.
struct KernelWeights {
  Eigen::VectorXd w;

  static KernelWeights ones(std::size_t len) {
    return {Eigen::VectorXd::Ones(static_cast<Eigen::Index>(len))};
  }
};

// k(a, b) = sum_e w_e [e in a and e in b]; a weighted dot product of the
// indicator vectors, hence symmetric and PSD.
double kernel_eval(const EdgeIndicator& a, const EdgeIndicator& b, const KernelWeights& w);

struct GpTrainSet {
  int n = 0;  // node count of the graphs
  std::vector<EdgeIndicator> graphs;
  Eigen::VectorXd scores;  // exact scores, uncentered

  std::size_t size() const { return graphs.size(); }
  void validate() const;
};

struct TuneResult {
  KernelWeights weights;
  double lml = 0.0;
  int iterations = 0;
  bool warning = false;  // set when the ascent hit non-finite evaluations
};

// GP evidence of the centered scores under K(w) + jitter*I. A negative
// jitter selects the default 1e-8 * trace(K)/n_s.
double log_marginal_likelihood(const GpTrainSet& train, const KernelWeights& w, double jitter = -1.0);

// d lml / d log(w_e), one component per possible edge. An edge present in no
// training graph has derivative exactly zero.
Eigen::VectorXd lml_gradient(const GpTrainSet& train, const KernelWeights& w, double jitter = -1.0);

// Gradient ascent on log-weights: initial step 0.1, halved until a trial
// improves (non-finite trials are rejected the same way); the working step
// carries over between iterations. Stops when the improvement drops below
// tol, no improving step exists, or max_iters is reached. Accepted lml
// values are non-decreasing by construction.
TuneResult tune_weights(const GpTrainSet& train, KernelWeights init, double jitter = -1.0,
                        int max_iters = 200, double tol = 1e-6);

// Trained simple-kriging proxy. The Gram matrix is factorized once at fit
// time; predictions are pure and safe for concurrent callers.
class GpModel {
 public:
  // Centers the scores, factorizes K(w) + jitter*I (escalating the jitter
  // x10 up to three times if the factorization fails), and precomputes
  // alpha = K^-1 y_centered.
  static GpModel fit(const GpTrainSet& train, KernelWeights w, double jitter = -1.0);

  double predict(const EdgeIndicator& q) const;
  Eigen::VectorXd predict_batch(const std::vector<EdgeIndicator>& qs) const;

  // Score change from toggling edge e, identical for every graph: the
  // co-occurrence kernel makes the posterior mean linear in the indicator.
  double edge_coefficient(std::size_t e) const { return edge_coef_[static_cast<Eigen::Index>(e)]; }

  int nodes() const { return n_; }
  std::size_t train_size() const { return train_.size(); }
  double y_mean() const { return y_mean_; }
  double jitter() const { return jitter_used_; }
  const KernelWeights& weights() const { return weights_; }
  const std::vector<EdgeIndicator>& train_graphs() const { return train_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }

  // JSON document with n, n_s, indicator bitstrings, centered scores,
  // y_mean, weights, and jitter; loading re-fits deterministically.
  std::string to_json_string() const;
  void save_json(const std::string& path) const;
  static GpModel load_json_string(const std::string& text);
  static GpModel load_json(const std::string& path);

 private:
  GpModel() = default;

  int n_ = 0;
  std::vector<EdgeIndicator> train_;
  Eigen::VectorXd y_centered_;
  double y_mean_ = 0.0;
  KernelWeights weights_;
  double jitter_used_ = 0.0;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd edge_coef_;  // w_e * sum_t alpha_t [e in g_t]
};

// Proxy-driven scorer for greedy search.
class GpScorer final : public Scorer {
 public:
  explicit GpScorer(const GpModel& model) : model_(model) {}

  double begin(const Dag& start) override;
  double delta(const Dag& g, const Move& mv) override;
  void applied(const Dag&, const Move&) override {}
  const char* tag() const override { return "proxy"; }

 private:
  const GpModel& model_;
};

}  // namespace bnp
