// SPDX-License-Identifier: Apache-2.0
#include "bnp/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "bnp/common.hpp"

namespace bnp {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

Dataset::Dataset(std::vector<std::vector<std::int32_t>> columns,
                 std::vector<int> arities, std::vector<std::string> names)
    : cols_(std::move(columns)), arities_(std::move(arities)), names_(std::move(names)) {
  if (cols_.empty()) throw InvalidArgument("dataset: needs at least one variable");
  if (arities_.size() != cols_.size() || names_.size() != cols_.size())
    throw InvalidArgument("dataset: arities/names size mismatch");
  m_ = static_cast<std::int64_t>(cols_[0].size());
  if (m_ < 1) throw InvalidArgument("dataset: needs at least one row");
  for (std::size_t c = 0; c < cols_.size(); ++c) {
    if (static_cast<std::int64_t>(cols_[c].size()) != m_)
      throw InvalidArgument("dataset: ragged columns");
    if (arities_[c] < 2)
      throw InvalidArgument("dataset: arity of variable '" + names_[c] + "' must be >= 2");
    for (std::int64_t r = 0; r < m_; ++r) {
      std::int32_t v = cols_[c][static_cast<std::size_t>(r)];
      if (v < 0 || v >= arities_[c])
        throw InvalidArgument("dataset: value " + std::to_string(v) + " out of range for variable '" +
                              names_[c] + "' (arity " + std::to_string(arities_[c]) + ") at row " +
                              std::to_string(r));
    }
  }
}

Dataset Dataset::load_csv(const std::string& path) {
  return load_csv(path, std::map<std::string, int>{});
}

Dataset Dataset::load_csv(const std::string& path, const std::map<std::string, int>& arity_spec) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  std::vector<std::string> names = split_csv_line(line);
  if (names.empty()) throw ParseError(path + ": empty header row");
  for (std::size_t c = 0; c < names.size(); ++c)
    if (names[c].empty())
      throw ParseError(path + ": empty variable name in header column " + std::to_string(c + 1));

  const std::size_t n = names.size();
  std::vector<std::vector<std::int32_t>> cols(n);
  std::int64_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) {
      // Tolerate a single trailing blank line only.
      if (in.peek() == EOF) break;
      throw ParseError(path + ": blank row " + std::to_string(row));
    }
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != n)
      throw ParseError(path + ": row " + std::to_string(row) + " has " +
                       std::to_string(fields.size()) + " fields, expected " + std::to_string(n));
    for (std::size_t c = 0; c < n; ++c) {
      const std::string& f = fields[c];
      if (f.empty())
        throw ParseError(path + ": missing value at row " + std::to_string(row) + ", column '" +
                         names[c] + "' (missing data is not supported)");
      std::size_t used = 0;
      long v = 0;
      try {
        v = std::stol(f, &used);
      } catch (const std::exception&) {
        throw ParseError(path + ": non-integer value '" + f + "' at row " + std::to_string(row) +
                         ", column '" + names[c] + "'");
      }
      if (used != f.size())
        throw ParseError(path + ": non-integer value '" + f + "' at row " + std::to_string(row) +
                         ", column '" + names[c] + "'");
      if (v < 0)
        throw ParseError(path + ": negative value at row " + std::to_string(row) + ", column '" +
                         names[c] + "'");
      cols[c].push_back(static_cast<std::int32_t>(v));
    }
  }
  if (row == 0) throw ParseError(path + ": no data rows");

  std::vector<int> arities(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::int32_t max_seen = 0;
    for (std::int32_t v : cols[c]) max_seen = std::max(max_seen, v);
    auto it = arity_spec.find(names[c]);
    if (it != arity_spec.end()) {
      if (it->second <= max_seen)
        throw InvalidArgument(path + ": declared arity " + std::to_string(it->second) +
                              " for variable '" + names[c] + "' does not cover observed value " +
                              std::to_string(max_seen));
      arities[c] = it->second;
    } else {
      arities[c] = std::max(2, max_seen + 1);
    }
  }
  return Dataset(std::move(cols), std::move(arities), std::move(names));
}

Dataset Dataset::load_csv_with_sidecar(const std::string& csv_path, const std::string& arity_json_path) {
  std::ifstream in(arity_json_path);
  if (!in) throw IoError("cannot open '" + arity_json_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(arity_json_path + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(arity_json_path + ": expected an object mapping name -> arity");
  std::map<std::string, int> spec;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number_integer())
      throw ParseError(arity_json_path + ": arity for '" + it.key() + "' must be an integer");
    spec[it.key()] = it.value().get<int>();
  }
  return load_csv(csv_path, spec);
}

void Dataset::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (int c = 0; c < n(); ++c) out << (c ? "," : "") << names_[static_cast<std::size_t>(c)];
  out << "\n";
  for (std::int64_t r = 0; r < m_; ++r) {
    for (int c = 0; c < n(); ++c) out << (c ? "," : "") << value(r, c);
    out << "\n";
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

int Dataset::arity(int i) const {
  check_index(i);
  return arities_[static_cast<std::size_t>(i)];
}

const std::string& Dataset::name(int i) const {
  check_index(i);
  return names_[static_cast<std::size_t>(i)];
}

const std::int32_t* Dataset::column(int i) const {
  check_index(i);
  return cols_[static_cast<std::size_t>(i)].data();
}

std::vector<std::int64_t> Dataset::column_marginal(int i) const {
  check_index(i);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(arities_[static_cast<std::size_t>(i)]), 0);
  for (std::int32_t v : cols_[static_cast<std::size_t>(i)]) counts[static_cast<std::size_t>(v)]++;
  return counts;
}

void Dataset::check_index(int i) const {
  if (i < 0 || i >= n())
    throw InvalidArgument("dataset: variable index " + std::to_string(i) + " out of range");
}

}  // namespace bnp
