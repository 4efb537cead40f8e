// SPDX-License-Identifier: Apache-2.0
#include "bnp/scoring.hpp"

#include <cmath>

namespace bnp {

namespace {

void validate(const BdeParams& p) {
  if (!(p.ess > 0.0)) throw InvalidArgument("bde: ess must be positive");
}

Family moved_family(const Dag& g, const Move& mv) {
  std::vector<int> parents = g.parents(mv.to);
  if (mv.kind == Move::Kind::add) {
    parents.push_back(mv.from);
  } else {
    std::erase(parents, mv.from);
  }
  return Family(mv.to, std::move(parents));
}

void check_move_legal(const Dag& g, const Move& mv) {
  if (mv.kind == Move::Kind::add) {
    if (g.has_edge(mv.from, mv.to)) throw InvalidArgument("illegal move: edge already present");
    if (g.creates_cycle(mv.from, mv.to))
      throw InvalidArgument("illegal move: edge would create a cycle");
  } else {
    if (!g.has_edge(mv.from, mv.to)) throw InvalidArgument("illegal move: edge not present");
  }
}

}  // namespace

void ScoreLedger::recompute_total() {
  double t = 0.0;
  for (double s : family_scores) t += s;
  total = t;
}

double family_log_bde(const FamilyCounts& counts, const BdeParams& p) {
  validate(p);
  const double lambda_ij = p.ess / static_cast<double>(counts.config_space);
  const double lambda_ijk = lambda_ij / static_cast<double>(counts.child_arity);
  const double lg_ij = log_gamma(lambda_ij);
  const double lg_ijk = log_gamma(lambda_ijk);

  double score = 0.0;
  for (const auto& [j, cell] : counts.configs) {
    if (cell.total == 0) continue;  // empty configurations cancel exactly
    score += lg_ij - log_gamma(lambda_ij + static_cast<double>(cell.total));
    for (std::int64_t c : cell.per_value)
      if (c > 0) score += log_gamma(lambda_ijk + static_cast<double>(c)) - lg_ijk;
  }
  return score;
}

ScoreLedger log_bde(const Dag& g, const Dataset& d, const BdeParams& p, CountsCache& cache) {
  validate(p);
  if (g.node_count() != d.n())
    throw InvalidArgument("log_bde: graph and dataset disagree on variable count");
  ScoreLedger ledger;
  ledger.families.reserve(static_cast<std::size_t>(d.n()));
  ledger.family_scores.reserve(static_cast<std::size_t>(d.n()));
  for (int i = 0; i < d.n(); ++i) {
    Family f(i, g.parents(i));
    ledger.family_scores.push_back(family_log_bde(*cache.get(f), p));
    ledger.families.push_back(std::move(f));
  }
  ledger.recompute_total();
  return ledger;
}

double delta_log_bde(const Dag& g, const ScoreLedger& ledger, const Move& mv,
                     const BdeParams& p, CountsCache& cache) {
  check_move_legal(g, mv);
  const auto child = static_cast<std::size_t>(mv.to);
  if (child >= ledger.family_scores.size())
    throw InvalidArgument("delta_log_bde: ledger does not cover the move's child");
  const Family f = moved_family(g, mv);
  return family_log_bde(*cache.get(f), p) - ledger.family_scores[child];
}

double log_bic(const Dag& g, const Dataset& d, CountsCache& cache) {
  if (g.node_count() != d.n())
    throw InvalidArgument("log_bic: graph and dataset disagree on variable count");
  double loglik = 0.0;
  double dof = 0.0;
  for (int i = 0; i < d.n(); ++i) {
    const auto counts = cache.get(Family(i, g.parents(i)));
    for (const auto& [j, cell] : counts->configs) {
      const double nij = static_cast<double>(cell.total);
      for (std::int64_t c : cell.per_value)
        if (c > 0) loglik += static_cast<double>(c) * std::log(static_cast<double>(c) / nij);
    }
    dof += static_cast<double>(d.arity(i) - 1) * static_cast<double>(counts->config_space);
  }
  return loglik - 0.5 * std::log(static_cast<double>(d.m())) * dof;
}

double log_bic(const Dag& g, const Dataset& d) {
  CountsCache cache(d);
  return log_bic(g, d, cache);
}

BdeScorer::BdeScorer(const Dataset& d, BdeParams p) : data_(d), params_(p), cache_(d) {
  validate(params_);
}

double BdeScorer::family_score(const Family& f) {
  {
    std::shared_lock lock(memo_mu_);
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
  }
  const double s = family_log_bde(*cache_.get(f), params_);
  std::unique_lock lock(memo_mu_);
  return memo_.try_emplace(f, s).first->second;
}

double BdeScorer::score_graph(const Dag& g) {
  if (g.node_count() != data_.n())
    throw InvalidArgument("score_graph: graph and dataset disagree on variable count");
  double total = 0.0;
  for (int i = 0; i < g.node_count(); ++i) total += family_score(Family(i, g.parents(i)));
  return total;
}

double BdeScorer::begin(const Dag& start) {
  ledger_ = ScoreLedger{};
  ledger_.families.reserve(static_cast<std::size_t>(start.node_count()));
  ledger_.family_scores.reserve(static_cast<std::size_t>(start.node_count()));
  for (int i = 0; i < start.node_count(); ++i) {
    Family f(i, start.parents(i));
    ledger_.family_scores.push_back(family_score(f));
    ledger_.families.push_back(std::move(f));
  }
  ledger_.recompute_total();
  return ledger_.total;
}

double BdeScorer::delta(const Dag& g, const Move& mv) {
  check_move_legal(g, mv);
  return family_score(moved_family(g, mv)) -
         ledger_.family_scores[static_cast<std::size_t>(mv.to)];
}

void BdeScorer::applied(const Dag& g_after, const Move& mv) {
  Family f(mv.to, g_after.parents(mv.to));
  const auto child = static_cast<std::size_t>(mv.to);
  ledger_.family_scores[child] = family_score(f);
  ledger_.families[child] = std::move(f);
  ledger_.recompute_total();
}

}  // namespace bnp
