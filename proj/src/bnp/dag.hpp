// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace bnp {

struct Move {
  enum class Kind { add, del };
  Kind kind;
  int from;
  int to;

  bool operator==(const Move& other) const {
    return kind == other.kind && from == other.from && to == other.to;
  }
};

// Directed acyclic graph on n ordered nodes. Every mutation re-checks
// acyclicity, so an instance can never hold a cycle.
class Dag {
 public:
  explicit Dag(int n);

  int node_count() const { return n_; }
  int edge_count() const { return edge_count_; }
  bool has_edge(int u, int v) const;
  const std::vector<int>& parents(int v) const;
  const std::vector<int>& children(int u) const;

  // True iff adding u->v would close a directed cycle (v already reaches u).
  bool creates_cycle(int u, int v) const;

  void add_edge(int u, int v);     // throws if present or would create a cycle
  void remove_edge(int u, int v);  // throws if absent
  void apply(const Move& mv);
  Dag with_move(const Move& mv) const;

  // All legal moves in canonical order: deletions of present edges over
  // lexicographic (u, v), then additions that keep the graph acyclic.
  std::vector<Move> legal_moves() const;

  // Edges sorted lexicographically.
  std::vector<std::pair<int, int>> edges() const;

  // JSON document {"n": int, "edges": [[u, v], ...]}.
  static Dag from_json_string(const std::string& text);
  static Dag from_json_file(const std::string& path);
  std::string to_json_string() const;
  void to_json_file(const std::string& path) const;

  bool operator==(const Dag& other) const {
    return n_ == other.n_ && parents_ == other.parents_;
  }

 private:
  void check_node(int v) const;
  void check_pair(int u, int v) const;

  int n_ = 0;
  int edge_count_ = 0;
  std::vector<std::vector<int>> parents_;   // sorted
  std::vector<std::vector<int>> children_;  // sorted
};

}  // namespace bnp
