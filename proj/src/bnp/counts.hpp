// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "bnp/dataset.hpp"

namespace bnp {

// A child variable plus its parent set, in canonical form: parent indices
// strictly increasing, child excluded. The unit of score decomposition and
// the cache key for counting.
struct Family {
  int child;
  std::vector<int> parents;

  Family(int child_index, std::vector<int> parent_indices);

  bool operator==(const Family& other) const {
    return child == other.child && parents == other.parents;
  }
};

struct FamilyHash {
  std::size_t operator()(const Family& f) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::size_t v) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    mix(static_cast<std::size_t>(f.child));
    for (int p : f.parents) mix(static_cast<std::size_t>(p));
    return h;
  }
};

// Contingency counts for one family. Parent configurations are indexed
// mixed-radix with the first (lowest-index) parent as the lowest digit.
// Only configurations that occur in the data are stored; an absent
// configuration means all-zero counts.
struct FamilyCounts {
  struct Cell {
    std::vector<std::int64_t> per_value;  // N_ijk over child values k
    std::int64_t total = 0;               // N_ij
  };

  Family family;
  int child_arity = 0;
  std::uint64_t config_space = 1;  // #C_i, the full configuration count
  std::vector<int> parent_arities;
  std::unordered_map<std::uint64_t, Cell> configs;

  std::int64_t total() const;  // sums to m by construction
};

// One full scan of the data; deterministic. Throws InvalidArgument if the
// configuration space size overflows 64 bits.
FamilyCounts family_counts(const Dataset& d, const Family& f);

// Memoizing layer over family_counts for a single dataset. Concurrent
// readers are fine; racing inserts of the same canonical family both
// compute, one wins, and the results are identical either way.
class CountsCache {
 public:
  explicit CountsCache(const Dataset& d) : data_(d) {}

  std::shared_ptr<const FamilyCounts> get(const Family& f);
  void clear();
  std::size_t size() const;
  const Dataset& data() const { return data_; }

 private:
  const Dataset& data_;
  mutable std::shared_mutex mu_;
  std::unordered_map<Family, std::shared_ptr<const FamilyCounts>, FamilyHash> map_;
};

}  // namespace bnp
