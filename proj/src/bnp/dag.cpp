// SPDX-License-Identifier: Apache-2.0
#include "bnp/dag.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

#include "bnp/common.hpp"

namespace bnp {

namespace {

void insert_sorted(std::vector<int>& v, int x) {
  v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

void erase_sorted(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  v.erase(it);
}

}  // namespace

Dag::Dag(int n) : n_(n) {
  if (n < 1) throw InvalidArgument("dag: node count must be >= 1");
  parents_.resize(static_cast<std::size_t>(n));
  children_.resize(static_cast<std::size_t>(n));
}

bool Dag::has_edge(int u, int v) const {
  check_pair(u, v);
  const auto& ch = children_[static_cast<std::size_t>(u)];
  return std::binary_search(ch.begin(), ch.end(), v);
}

const std::vector<int>& Dag::parents(int v) const {
  check_node(v);
  return parents_[static_cast<std::size_t>(v)];
}

const std::vector<int>& Dag::children(int u) const {
  check_node(u);
  return children_[static_cast<std::size_t>(u)];
}

bool Dag::creates_cycle(int u, int v) const {
  check_pair(u, v);
  // Adding u->v closes a cycle iff u is reachable from v.
  std::vector<char> visited(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{v};
  visited[static_cast<std::size_t>(v)] = 1;
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    if (cur == u) return true;
    for (int next : children_[static_cast<std::size_t>(cur)]) {
      if (!visited[static_cast<std::size_t>(next)]) {
        visited[static_cast<std::size_t>(next)] = 1;
        stack.push_back(next);
      }
    }
  }
  return false;
}

void Dag::add_edge(int u, int v) {
  if (has_edge(u, v)) throw InvalidArgument("dag: edge already present");
  if (creates_cycle(u, v)) throw InvalidArgument("dag: adding edge would create a cycle");
  insert_sorted(children_[static_cast<std::size_t>(u)], v);
  insert_sorted(parents_[static_cast<std::size_t>(v)], u);
  ++edge_count_;
}

void Dag::remove_edge(int u, int v) {
  if (!has_edge(u, v)) throw InvalidArgument("dag: edge not present");
  erase_sorted(children_[static_cast<std::size_t>(u)], v);
  erase_sorted(parents_[static_cast<std::size_t>(v)], u);
  --edge_count_;
}

void Dag::apply(const Move& mv) {
  if (mv.kind == Move::Kind::add)
    add_edge(mv.from, mv.to);
  else
    remove_edge(mv.from, mv.to);
}

Dag Dag::with_move(const Move& mv) const {
  Dag copy = *this;
  copy.apply(mv);
  return copy;
}

std::vector<Move> Dag::legal_moves() const {
  std::vector<Move> moves;
  for (int u = 0; u < n_; ++u)
    for (int v : children_[static_cast<std::size_t>(u)])
      moves.push_back({Move::Kind::del, u, v});
  for (int u = 0; u < n_; ++u) {
    for (int v = 0; v < n_; ++v) {
      if (u == v || has_edge(u, v)) continue;
      if (!creates_cycle(u, v)) moves.push_back({Move::Kind::add, u, v});
    }
  }
  return moves;
}

std::vector<std::pair<int, int>> Dag::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (int u = 0; u < n_; ++u)
    for (int v : children_[static_cast<std::size_t>(u)]) out.emplace_back(u, v);
  return out;
}

Dag Dag::from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("graph json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw ParseError("graph json: expected {\"n\": ..., \"edges\": [[u,v],...]}");
  Dag g(j.at("n").get<int>());
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw ParseError("graph json: malformed edge entry");
    g.add_edge(e[0].get<int>(), e[1].get<int>());
  }
  return g;
}

Dag Dag::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return from_json_string(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string Dag::to_json_string() const {
  nlohmann::ordered_json j;
  j["n"] = n_;
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& [u, v] : edges()) j["edges"].push_back({u, v});
  return j.dump();
}

void Dag::to_json_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << to_json_string() << "\n";
  if (!out) throw IoError("write to '" + path + "' failed");
}

void Dag::check_node(int v) const {
  if (v < 0 || v >= n_)
    throw InvalidArgument("dag: node index " + std::to_string(v) + " out of range");
}

void Dag::check_pair(int u, int v) const {
  check_node(u);
  check_node(v);
  if (u == v) throw InvalidArgument("dag: self-loop (u == v) is not a valid edge");
}

}  // namespace bnp
