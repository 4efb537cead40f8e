// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "bnp/counts.hpp"
#include "bnp/dag.hpp"
#include "bnp/dataset.hpp"
#include "bnp/search.hpp"
#include "bnp/specfun.hpp"

namespace bnp {

// Prior strength for the BDe score. The pseudo-counts split ess uniformly
// over a family's cells: lambda_ijk = ess / (#C_i * #V_i), so
// lambda_ij = #V_i * lambda_ijk = ess / #C_i.
struct BdeParams {
  double ess = 1.0;
};

// Per-child family scores for one graph; total is their sum
// (decomposability).
struct ScoreLedger {
  std::vector<Family> families;
  std::vector<double> family_scores;
  double total = 0.0;

  void recompute_total();
};

// One child term of the log-BDe sum. Configurations with N_ij = 0
// contribute exactly zero and are skipped.
double family_log_bde(const FamilyCounts& counts, const BdeParams& p);

// Full log-BDe score of a graph; higher is better.
ScoreLedger log_bde(const Dag& g, const Dataset& d, const BdeParams& p, CountsCache& cache);

// log sc(G') - log sc(G) for a single edge move, re-scoring only the moved
// edge's child family. Exactly equals the full-rescore difference.
double delta_log_bde(const Dag& g, const ScoreLedger& ledger, const Move& mv,
                     const BdeParams& p, CountsCache& cache);

// BIC: maximized log-likelihood minus (ln m / 2) times the parameter count
// |B| = sum_i (#V_i - 1) * #C_i. Terms with N_ijk = 0 contribute zero.
double log_bic(const Dag& g, const Dataset& d, CountsCache& cache);
double log_bic(const Dag& g, const Dataset& d);

// Exact scorer for greedy search. Family scores are memoized, so re-scoring
// a family seen earlier in the run costs a lookup. score_graph() is safe to
// call from multiple threads; the Scorer interface is driver-only.
class BdeScorer final : public Scorer {
 public:
  BdeScorer(const Dataset& d, BdeParams p);

  // Thread-safe full-graph score; independent of scheduling.
  double score_graph(const Dag& g);

  double begin(const Dag& start) override;
  double delta(const Dag& g, const Move& mv) override;
  void applied(const Dag& g_after, const Move& mv) override;
  const char* tag() const override { return "exact"; }

  const ScoreLedger& ledger() const { return ledger_; }
  CountsCache& cache() { return cache_; }
  const BdeParams& params() const { return params_; }

 private:
  double family_score(const Family& f);

  const Dataset& data_;
  BdeParams params_;
  CountsCache cache_;
  std::shared_mutex memo_mu_;
  std::unordered_map<Family, double, FamilyHash> memo_;
  ScoreLedger ledger_;
};

}  // namespace bnp
