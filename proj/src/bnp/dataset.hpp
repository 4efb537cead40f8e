// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bnp {

// Immutable matrix of discrete observations: m rows over n variables, each
// value a dense category code in [0, arity). Safe for unrestricted
// concurrent reads once constructed.
class Dataset {
 public:
  // columns[c][r] is the value of variable c in row r. Validates every entry
  // against the declared arity.
  Dataset(std::vector<std::vector<std::int32_t>> columns,
          std::vector<int> arities, std::vector<std::string> names);

  // CSV layout: header row of variable names, then rows of non-negative
  // integer codes. Arities are inferred as (max observed + 1) unless the
  // spec map provides one for that variable name; a declared arity must
  // exceed the maximum observed value.
  static Dataset load_csv(const std::string& path);
  static Dataset load_csv(const std::string& path,
                          const std::map<std::string, int>& arity_spec);
  // Same, reading the arity spec from a JSON sidecar {"name": arity, ...}.
  static Dataset load_csv_with_sidecar(const std::string& csv_path,
                                       const std::string& arity_json_path);

  void save_csv(const std::string& path) const;

  int n() const { return static_cast<int>(cols_.size()); }
  std::int64_t m() const { return m_; }
  int arity(int i) const;
  const std::string& name(int i) const;
  const std::vector<std::string>& names() const { return names_; }
  const std::int32_t* column(int i) const;
  std::int32_t value(std::int64_t row, int col) const {
    return cols_[static_cast<std::size_t>(col)][static_cast<std::size_t>(row)];
  }

  // Per-category occurrence counts for one variable; sums to m.
  std::vector<std::int64_t> column_marginal(int i) const;

  bool operator==(const Dataset& other) const {
    return cols_ == other.cols_ && arities_ == other.arities_ && names_ == other.names_;
  }

 private:
  void check_index(int i) const;

  std::vector<std::vector<std::int32_t>> cols_;
  std::vector<int> arities_;
  std::vector<std::string> names_;
  std::int64_t m_ = 0;
};

}  // namespace bnp
