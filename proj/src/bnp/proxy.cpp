// SPDX-License-Identifier: Apache-2.0
#include "bnp/proxy.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "bnp/common.hpp"

namespace bnp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Shared factorization workspace: K(w) = B^T diag(w) B + jitter*I with B the
// E x n_s 0/1 indicator matrix. Reused across tuning iterations to keep the
// inner loop allocation-free.
class GramWorkspace {
 public:
  explicit GramWorkspace(const GpTrainSet& train) {
    train.validate();
    const auto e = static_cast<Eigen::Index>(EdgeIndicator::length(train.n));
    const auto ns = static_cast<Eigen::Index>(train.size());
    B_.resize(e, ns);
    for (Eigen::Index t = 0; t < ns; ++t)
      for (Eigen::Index i = 0; i < e; ++i)
        B_(i, t) = train.graphs[static_cast<std::size_t>(t)].bits[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    edge_counts_ = B_.rowwise().sum();
    y_mean_ = train.scores.mean();
    yc_ = train.scores.array() - y_mean_;
    wb_.resize(e, ns);
    k_.resize(ns, ns);
  }

  double default_jitter(const Eigen::VectorXd& w) const {
    const double trace = w.dot(edge_counts_);
    return trace > 0.0 ? 1e-8 * trace / static_cast<double>(k_.rows()) : 1e-12;
  }

  bool factorize(const Eigen::VectorXd& w, double jitter) {
    if (w.size() != B_.rows())
      throw InvalidArgument("kernel weights length does not match the edge count");
    if (!w.allFinite()) return false;
    wb_.noalias() = w.asDiagonal() * B_;
    k_.noalias() = B_.transpose() * wb_;
    k_.diagonal().array() += jitter;
    if (!k_.allFinite()) return false;
    llt_.compute(k_);
    if (llt_.info() != Eigen::Success) return false;
    alpha_ = llt_.solve(yc_);
    logdet_ = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
    return alpha_.allFinite() && std::isfinite(logdet_);
  }

  double lml() const {
    const double ns = static_cast<double>(k_.rows());
    return -0.5 * yc_.dot(alpha_) - 0.5 * logdet_ - 0.5 * ns * std::log(kTwoPi);
  }

  // d lml / d log(w_e) = w_e * 0.5 * ((b_e . alpha)^2 - b_e^T K^-1 b_e).
  Eigen::VectorXd gradient_logw(const Eigen::VectorXd& w) const {
    Eigen::VectorXd u = B_ * alpha_;
    Eigen::MatrixXd x = llt_.solve(B_.transpose());  // n_s x E
    Eigen::VectorXd grad(B_.rows());
    for (Eigen::Index e = 0; e < B_.rows(); ++e) {
      const double s = B_.row(e).dot(x.col(e));
      grad(e) = w(e) * 0.5 * (u(e) * u(e) - s);
    }
    return grad;
  }

  const Eigen::MatrixXd& indicator_matrix() const { return B_; }
  const Eigen::VectorXd& y_centered() const { return yc_; }
  double y_mean() const { return y_mean_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }

 private:
  Eigen::MatrixXd B_;
  Eigen::VectorXd edge_counts_;
  Eigen::VectorXd yc_;
  double y_mean_ = 0.0;
  Eigen::MatrixXd wb_;
  Eigen::MatrixXd k_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
  double logdet_ = 0.0;
};

// Factorize with jitter escalation: x10 up to three times.
double factorize_escalating(GramWorkspace& ws, const Eigen::VectorXd& w, double jitter) {
  double j = jitter;
  for (int attempt = 0; attempt < 4; ++attempt) {
    if (ws.factorize(w, j)) return j;
    j = (j > 0.0 ? j * 10.0 : 1e-12);
  }
  throw NumericError("gram matrix factorization failed even with jitter escalated to " +
                     std::to_string(j) + "; the kernel matrix is too ill-conditioned");
}

}  // namespace

std::size_t EdgeIndicator::pair_index(int u, int v, int n) {
  if (u < 0 || v < 0 || u >= n || v >= n || u == v)
    throw InvalidArgument("edge indicator: bad node pair");
  return static_cast<std::size_t>(u) * static_cast<std::size_t>(n - 1) +
         static_cast<std::size_t>(v > u ? v - 1 : v);
}

EdgeIndicator EdgeIndicator::from_dag(const Dag& g) {
  EdgeIndicator ind;
  ind.bits.assign(length(g.node_count()), 0);
  for (const auto& [u, v] : g.edges()) ind.bits[pair_index(u, v, g.node_count())] = 1;
  return ind;
}

double kernel_eval(const EdgeIndicator& a, const EdgeIndicator& b, const KernelWeights& w) {
  if (a.size() != b.size() || static_cast<std::size_t>(w.w.size()) != a.size())
    throw InvalidArgument("kernel_eval: indicator/weight length mismatch");
  double acc = 0.0;
  for (std::size_t e = 0; e < a.size(); ++e)
    if (a.bits[e] && b.bits[e]) acc += w.w(static_cast<Eigen::Index>(e));
  return acc;
}

void GpTrainSet::validate() const {
  if (n < 1) throw InvalidArgument("train set: node count must be >= 1");
  if (graphs.empty()) throw InvalidArgument("train set: needs at least one graph");
  if (static_cast<std::size_t>(scores.size()) != graphs.size())
    throw InvalidArgument("train set: score/graph count mismatch");
  for (const auto& g : graphs)
    if (g.size() != EdgeIndicator::length(n))
      throw InvalidArgument("train set: indicator length mismatch");
  if (!scores.allFinite()) throw InvalidArgument("train set: scores must be finite");
}

double log_marginal_likelihood(const GpTrainSet& train, const KernelWeights& w, double jitter) {
  GramWorkspace ws(train);
  const double j = jitter >= 0.0 ? jitter : ws.default_jitter(w.w);
  factorize_escalating(ws, w.w, j);
  return ws.lml();
}

Eigen::VectorXd lml_gradient(const GpTrainSet& train, const KernelWeights& w, double jitter) {
  GramWorkspace ws(train);
  const double j = jitter >= 0.0 ? jitter : ws.default_jitter(w.w);
  factorize_escalating(ws, w.w, j);
  return ws.gradient_logw(w.w);
}

TuneResult tune_weights(const GpTrainSet& train, KernelWeights init, double jitter,
                        int max_iters, double tol) {
  if (max_iters < 1) throw InvalidArgument("tune_weights: max_iters must be >= 1");
  if (!(tol > 0.0)) throw InvalidArgument("tune_weights: tol must be positive");
  if ((init.w.array() < 0.0).any())
    throw InvalidArgument("tune_weights: initial weights must be nonnegative");

  GramWorkspace ws(train);
  // The jitter is resolved once so the ascent climbs a fixed objective.
  const double j = factorize_escalating(
      ws, init.w, jitter >= 0.0 ? jitter : ws.default_jitter(init.w));

  TuneResult result;
  result.weights = std::move(init);
  result.lml = ws.lml();

  Eigen::VectorXd theta = result.weights.w.array().log();
  double step = 0.1;
  constexpr int kMaxHalvings = 60;

  for (int iter = 0; iter < max_iters; ++iter) {
    const Eigen::VectorXd grad = ws.gradient_logw(result.weights.w);
    if (!grad.allFinite()) {
      result.warning = true;
      break;
    }
    bool improved = false;
    bool saw_nonfinite = false;
    double improvement = 0.0;
    double s = step;
    for (int h = 0; h < kMaxHalvings; ++h, s *= 0.5) {
      const Eigen::VectorXd theta_try = theta + s * grad;
      const Eigen::VectorXd w_try = theta_try.array().exp();
      double lml_try = std::numeric_limits<double>::quiet_NaN();
      if (ws.factorize(w_try, j)) lml_try = ws.lml();
      if (!std::isfinite(lml_try)) {
        saw_nonfinite = true;
        continue;
      }
      if (lml_try > result.lml) {
        improvement = lml_try - result.lml;
        theta = theta_try;
        result.weights.w = w_try;
        result.lml = lml_try;
        improved = true;
        step = std::min(0.1, s * 2.0);
        break;
      }
    }
    if (!improved) {
      // No improving step at any scale: either a stationary point or the
      // objective kept evaluating non-finite.
      result.warning = result.warning || saw_nonfinite;
      // Leave the workspace holding the current iterate's factorization.
      ws.factorize(result.weights.w, j);
      break;
    }
    result.iterations = iter + 1;
    if (improvement < tol) break;
  }
  return result;
}

GpModel GpModel::fit(const GpTrainSet& train, KernelWeights w, double jitter) {
  if ((w.w.array() < 0.0).any())
    throw InvalidArgument("fit: kernel weights must be nonnegative");
  GramWorkspace ws(train);
  const double base = jitter >= 0.0 ? jitter : ws.default_jitter(w.w);
  const double used = factorize_escalating(ws, w.w, base);

  GpModel model;
  model.n_ = train.n;
  model.train_ = train.graphs;
  model.y_centered_ = ws.y_centered();
  model.y_mean_ = ws.y_mean();
  model.weights_ = std::move(w);
  model.jitter_used_ = used;
  model.alpha_ = ws.alpha();
  model.edge_coef_ = model.weights_.w.asDiagonal() * (ws.indicator_matrix() * model.alpha_);
  return model;
}

double GpModel::predict(const EdgeIndicator& q) const {
  if (q.size() != EdgeIndicator::length(n_))
    throw InvalidArgument("predict: indicator length mismatch");
  double acc = 0.0;
  for (std::size_t e = 0; e < q.size(); ++e)
    if (q.bits[e]) acc += edge_coef_(static_cast<Eigen::Index>(e));
  return acc + y_mean_;
}

Eigen::VectorXd GpModel::predict_batch(const std::vector<EdgeIndicator>& qs) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(qs.size()));
  for (std::size_t i = 0; i < qs.size(); ++i) out(static_cast<Eigen::Index>(i)) = predict(qs[i]);
  return out;
}

std::string GpModel::to_json_string() const {
  nlohmann::ordered_json j;
  j["n"] = n_;
  j["ns"] = train_.size();
  auto graphs = nlohmann::ordered_json::array();
  for (const auto& g : train_) {
    std::string bits(g.size(), '0');
    for (std::size_t e = 0; e < g.size(); ++e)
      if (g.bits[e]) bits[e] = '1';
    graphs.push_back(bits);
  }
  j["graphs"] = std::move(graphs);
  j["y"] = std::vector<double>(y_centered_.begin(), y_centered_.end());
  j["y_mean"] = y_mean_;
  j["weights"] = std::vector<double>(weights_.w.begin(), weights_.w.end());
  j["jitter"] = jitter_used_;
  return j.dump();
}

void GpModel::save_json(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << to_json_string() << "\n";
  if (!out) throw IoError("write to '" + path + "' failed");
}

GpModel GpModel::load_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("model json: ") + e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    const std::size_t ns = j.at("ns").get<std::size_t>();
    GpTrainSet train;
    train.n = n;
    for (const auto& entry : j.at("graphs")) {
      const std::string bits = entry.get<std::string>();
      if (bits.size() != EdgeIndicator::length(n))
        throw ParseError("model json: indicator bitstring has wrong length");
      EdgeIndicator ind;
      ind.bits.resize(bits.size());
      for (std::size_t e = 0; e < bits.size(); ++e) {
        if (bits[e] != '0' && bits[e] != '1')
          throw ParseError("model json: indicator bitstring must be 0/1");
        ind.bits[e] = bits[e] == '1' ? 1 : 0;
      }
      train.graphs.push_back(std::move(ind));
    }
    if (train.graphs.size() != ns) throw ParseError("model json: ns/graph count mismatch");
    const auto yc = j.at("y").get<std::vector<double>>();
    const double y_mean = j.at("y_mean").get<double>();
    if (yc.size() != ns) throw ParseError("model json: y length mismatch");
    train.scores.resize(static_cast<Eigen::Index>(ns));
    for (std::size_t i = 0; i < ns; ++i)
      train.scores(static_cast<Eigen::Index>(i)) = yc[i] + y_mean;
    const auto wv = j.at("weights").get<std::vector<double>>();
    if (wv.size() != EdgeIndicator::length(n))
      throw ParseError("model json: weights length mismatch");
    KernelWeights w{Eigen::Map<const Eigen::VectorXd>(wv.data(), static_cast<Eigen::Index>(wv.size()))};
    const double jitter = j.at("jitter").get<double>();
    return fit(train, std::move(w), jitter);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model json: ") + e.what());
  }
}

GpModel GpModel::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_json_string(text);
}

double GpScorer::begin(const Dag& start) {
  if (start.node_count() != model_.nodes())
    throw InvalidArgument("proxy scorer: graph size does not match the model");
  return model_.predict(EdgeIndicator::from_dag(start));
}

double GpScorer::delta(const Dag& g, const Move& mv) {
  if (g.node_count() != model_.nodes())
    throw InvalidArgument("proxy scorer: graph size does not match the model");
  if (mv.kind == Move::Kind::add) {
    if (g.has_edge(mv.from, mv.to)) throw InvalidArgument("illegal move: edge already present");
    if (g.creates_cycle(mv.from, mv.to))
      throw InvalidArgument("illegal move: edge would create a cycle");
  } else if (!g.has_edge(mv.from, mv.to)) {
    throw InvalidArgument("illegal move: edge not present");
  }
  const double coef =
      model_.edge_coefficient(EdgeIndicator::pair_index(mv.from, mv.to, model_.nodes()));
  return mv.kind == Move::Kind::add ? coef : -coef;
}

}  // namespace bnp
