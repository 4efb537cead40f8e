// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bnp/common.hpp"
#include "bnp/dag.hpp"

namespace bnp {

// Score provider for the greedy driver. delta() must return the score
// change of applying a legal move to g; applied() notifies the scorer that
// the move was taken so incremental state can follow the graph.
struct Scorer {
  virtual ~Scorer() = default;
  virtual double begin(const Dag& start) = 0;  // full score; resets state
  virtual double delta(const Dag& g, const Move& mv) = 0;
  virtual void applied(const Dag& g_after, const Move& mv) = 0;
  virtual const char* tag() const = 0;  // "exact" | "proxy"
};

struct TrajectoryStep {
  int step = 0;
  Move move{Move::Kind::add, 0, 0};
  double driving_score = 0.0;
  std::optional<double> exact_score;
  double elapsed_ms = 0.0;
};

struct SearchTrajectory {
  std::vector<TrajectoryStep> steps;
  std::chrono::system_clock::time_point started_at;
  std::chrono::system_clock::time_point finished_at;
  std::string scorer_tag;
  double start_score = 0.0;
  double final_score = 0.0;

  // Columns: step,kind,from,to,driving_score,exact_score,elapsed_ms.
  // exact_score is left empty when unrecorded.
  void write_csv(const std::string& path) const;
};

// Scorer failures surface with the trajectory gathered so far attached.
struct SearchError : std::runtime_error {
  SearchTrajectory partial;
  SearchError(const std::string& message, SearchTrajectory trajectory)
      : std::runtime_error(message), partial(std::move(trajectory)) {}
};

// Permutation-plus-independent-edges sampler: draws a uniform random node
// order, then keeps each order-respecting pair with probability p. Always
// acyclic; deterministic given the generator state.
Dag sample_random_dag(int n, double p, Rng& rng);

struct GreedyOptions {
  int max_steps = -1;  // < 0 selects the default bound 2 * n * (n - 1)
  // When set, evaluated on the graph after every applied move and recorded
  // as the trajectory's exact_score column.
  std::function<double(const Dag&)> exact_eval;
};

// Best-improvement hill climbing over single-edge moves. Each step evaluates
// every legal move and applies the best strictly-improving one, first in
// canonical move order on ties; stops when no move improves or the step
// budget is exhausted.
std::pair<Dag, SearchTrajectory> greedy_search(const Dag& start, Scorer& scorer,
                                               const GreedyOptions& opts = {});

}  // namespace bnp
