// SPDX-License-Identifier: Apache-2.0
#include "bnp/search.hpp"

#include <fstream>
#include <numeric>

namespace bnp {

void SearchTrajectory::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "step,kind,from,to,driving_score,exact_score,elapsed_ms\n";
  out.precision(17);
  for (const auto& s : steps) {
    out << s.step << ',' << (s.move.kind == Move::Kind::add ? "add" : "delete") << ','
        << s.move.from << ',' << s.move.to << ',' << s.driving_score << ',';
    if (s.exact_score) out << *s.exact_score;
    out << ',' << s.elapsed_ms << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

Dag sample_random_dag(int n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("sample_random_dag: p must be in [0, 1]");
  Dag g(n);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.below(static_cast<std::uint32_t>(i + 1)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() < p)
        g.add_edge(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  return g;
}

std::pair<Dag, SearchTrajectory> greedy_search(const Dag& start, Scorer& scorer,
                                               const GreedyOptions& opts) {
  const int n = start.node_count();
  const int max_steps = opts.max_steps >= 0 ? opts.max_steps : 2 * n * (n - 1);

  Dag g = start;
  SearchTrajectory traj;
  traj.scorer_tag = scorer.tag();
  traj.started_at = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();

  auto elapsed_ms = [&t0] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };
  auto fail = [&](const std::string& why) {
    traj.finished_at = std::chrono::system_clock::now();
    return SearchError(why, traj);
  };

  double score = 0.0;
  try {
    score = scorer.begin(g);
  } catch (const std::exception& e) {
    throw fail(std::string("scorer failed on start graph: ") + e.what());
  }
  traj.start_score = score;
  traj.final_score = score;

  for (int step = 1; step <= max_steps; ++step) {
    const std::vector<Move> moves = g.legal_moves();
    int best = -1;
    double best_delta = 0.0;  // only strictly-improving moves qualify
    for (std::size_t i = 0; i < moves.size(); ++i) {
      double d = 0.0;
      try {
        d = scorer.delta(g, moves[i]);
      } catch (const std::exception& e) {
        throw fail(std::string("scorer failed evaluating a move: ") + e.what());
      }
      if (d > best_delta) {
        best_delta = d;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;

    const Move chosen = moves[static_cast<std::size_t>(best)];
    g.apply(chosen);
    scorer.applied(g, chosen);
    score += best_delta;
    traj.final_score = score;

    TrajectoryStep rec;
    rec.step = step;
    rec.move = chosen;
    rec.driving_score = score;
    if (opts.exact_eval) {
      try {
        rec.exact_score = opts.exact_eval(g);
      } catch (const std::exception& e) {
        throw fail(std::string("exact evaluation failed mid-search: ") + e.what());
      }
    }
    rec.elapsed_ms = elapsed_ms();
    traj.steps.push_back(rec);
  }

  traj.finished_at = std::chrono::system_clock::now();
  return {std::move(g), std::move(traj)};
}

}  // namespace bnp
