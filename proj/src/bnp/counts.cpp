// SPDX-License-Identifier: Apache-2.0
#include "bnp/counts.hpp"

#include <algorithm>
#include <limits>

#include "bnp/common.hpp"

namespace bnp {

Family::Family(int child_index, std::vector<int> parent_indices)
    : child(child_index), parents(std::move(parent_indices)) {
  std::sort(parents.begin(), parents.end());
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (parents[i] == child) throw InvalidArgument("family: child cannot be its own parent");
    if (i > 0 && parents[i] == parents[i - 1])
      throw InvalidArgument("family: duplicate parent index");
  }
}

std::int64_t FamilyCounts::total() const {
  std::int64_t t = 0;
  for (const auto& [j, cell] : configs) t += cell.total;
  return t;
}

FamilyCounts family_counts(const Dataset& d, const Family& f) {
  const int n = d.n();
  if (f.child < 0 || f.child >= n)
    throw InvalidArgument("family_counts: child index out of range");
  for (int p : f.parents)
    if (p < 0 || p >= n) throw InvalidArgument("family_counts: parent index out of range");

  FamilyCounts fc{f, d.arity(f.child), 1, {}, {}};
  fc.parent_arities.reserve(f.parents.size());

  // Mixed-radix strides, first parent as the lowest digit.
  std::vector<std::uint64_t> stride(f.parents.size());
  std::uint64_t space = 1;
  for (std::size_t t = 0; t < f.parents.size(); ++t) {
    const std::uint64_t a = static_cast<std::uint64_t>(d.arity(f.parents[t]));
    fc.parent_arities.push_back(static_cast<int>(a));
    stride[t] = space;
    if (space > std::numeric_limits<std::uint64_t>::max() / a)
      throw InvalidArgument("family_counts: configuration space overflows (family too large)");
    space *= a;
  }
  fc.config_space = space;

  const std::int64_t m = d.m();
  const std::int32_t* child_col = d.column(f.child);
  std::vector<const std::int32_t*> parent_cols;
  parent_cols.reserve(f.parents.size());
  for (int p : f.parents) parent_cols.push_back(d.column(p));

  const std::size_t child_arity = static_cast<std::size_t>(fc.child_arity);
  for (std::int64_t r = 0; r < m; ++r) {
    std::uint64_t j = 0;
    for (std::size_t t = 0; t < parent_cols.size(); ++t)
      j += static_cast<std::uint64_t>(parent_cols[t][r]) * stride[t];
    auto [it, inserted] = fc.configs.try_emplace(j);
    if (inserted) it->second.per_value.assign(child_arity, 0);
    it->second.per_value[static_cast<std::size_t>(child_col[r])]++;
    it->second.total++;
  }
  return fc;
}

std::shared_ptr<const FamilyCounts> CountsCache::get(const Family& f) {
  {
    std::shared_lock lock(mu_);
    auto it = map_.find(f);
    if (it != map_.end()) return it->second;
  }
  auto computed = std::make_shared<const FamilyCounts>(family_counts(data_, f));
  std::unique_lock lock(mu_);
  auto [it, inserted] = map_.try_emplace(f, std::move(computed));
  return it->second;  // on a racing insert the first entry wins
}

void CountsCache::clear() {
  std::unique_lock lock(mu_);
  map_.clear();
}

std::size_t CountsCache::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

}  // namespace bnp
