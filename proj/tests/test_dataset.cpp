// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "bnp/common.hpp"
#include "bnp/dataset.hpp"
#include "support/oracles.hpp"

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "bnp_dataset_tests";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / name).string();
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("csv load reads values, names, and inferred arities back") {
  const auto path = write_temp("basic.csv", "a,b\n0,1\n1,0\n1,1\n");
  const bnp::Dataset d = bnp::Dataset::load_csv(path);
  CHECK(d.m() == 3);
  CHECK(d.n() == 2);
  CHECK(d.arity(0) == 2);
  CHECK(d.arity(1) == 2);
  CHECK(d.name(0) == "a");
  CHECK(d.value(0, 0) == 0);
  CHECK(d.value(2, 1) == 1);
}

TEST_CASE("arity inference is max observed plus one") {
  const auto path = write_temp("gap.csv", "a\n0\n2\n");
  const bnp::Dataset d = bnp::Dataset::load_csv(path);
  CHECK(d.arity(0) == 3);
}

TEST_CASE("declared arity must cover the observed values") {
  const auto path = write_temp("declared.csv", "a\n0\n2\n");
  CHECK_THROWS_AS(bnp::Dataset::load_csv(path, {{"a", 2}}), bnp::InvalidArgument);
  const bnp::Dataset d = bnp::Dataset::load_csv(path, {{"a", 5}});
  CHECK(d.arity(0) == 5);
}

TEST_CASE("arity sidecar json applies per name") {
  const auto csv = write_temp("sidecar.csv", "a,b\n0,0\n1,0\n");
  const auto json = write_temp("sidecar.json", "{\"b\": 4}");
  const bnp::Dataset d = bnp::Dataset::load_csv_with_sidecar(csv, json);
  CHECK(d.arity(0) == 2);
  CHECK(d.arity(1) == 4);
}

TEST_CASE("malformed input is rejected with row/column context") {
  CHECK_THROWS_AS(bnp::Dataset::load_csv(write_temp("short.csv", "a,b\n0\n")), bnp::ParseError);
  CHECK_THROWS_AS(bnp::Dataset::load_csv(write_temp("alpha.csv", "a\nx\n")), bnp::ParseError);
  CHECK_THROWS_AS(bnp::Dataset::load_csv(write_temp("neg.csv", "a\n-1\n")), bnp::ParseError);
  CHECK_THROWS_AS(bnp::Dataset::load_csv(write_temp("missing.csv", "a,b\n0,\n")), bnp::ParseError);
  CHECK_THROWS_AS(bnp::Dataset::load_csv(write_temp("empty.csv", "")), bnp::ParseError);
  CHECK_THROWS_AS(bnp::Dataset::load_csv(write_temp("norows.csv", "a,b\n")), bnp::ParseError);
  CHECK_THROWS_AS(bnp::Dataset::load_csv("/nonexistent/nowhere.csv"), bnp::IoError);

  try {
    bnp::Dataset::load_csv(write_temp("ctx.csv", "a,b\n0,0\n0,oops\n"));
    FAIL("expected ParseError");
  } catch (const bnp::ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("row 2") != std::string::npos);
    CHECK(what.find("b") != std::string::npos);
  }
}

TEST_CASE("round trip through csv preserves the dataset") {
  bnp::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const bnp::Dataset d = oracle::random_dataset(rng, 1 + static_cast<int>(rng.below(5)),
                                                  1 + static_cast<int>(rng.below(30)), 4);
    const auto path = write_temp("roundtrip.csv", "");
    d.save_csv(path);
    // Reload with explicit arities: inference can legitimately narrow a
    // column whose top category never occurs.
    std::map<std::string, int> spec;
    for (int c = 0; c < d.n(); ++c) spec[d.name(c)] = d.arity(c);
    CHECK(bnp::Dataset::load_csv(path, spec) == d);
  }
}

TEST_CASE("column marginals count categories and sum to m") {
  const bnp::Dataset d({{0, 1, 1}, {0, 0, 0}}, {2, 2}, {"a", "b"});
  CHECK(d.column_marginal(0) == std::vector<std::int64_t>{1, 2});
  CHECK(d.column_marginal(1) == std::vector<std::int64_t>{3, 0});
  CHECK_THROWS_AS(d.column_marginal(2), bnp::InvalidArgument);

  bnp::Rng rng(11);
  const bnp::Dataset r = oracle::random_dataset(rng, 4, 57, 5);
  for (int c = 0; c < r.n(); ++c) {
    const auto counts = r.column_marginal(c);
    std::int64_t sum = 0;
    for (auto v : counts) sum += v;
    CHECK(sum == r.m());
  }
}

TEST_CASE("constructor enforces the invariants") {
  CHECK_THROWS_AS(bnp::Dataset({{0, 2}}, {2}, {"a"}), bnp::InvalidArgument);  // value >= arity
  CHECK_THROWS_AS(bnp::Dataset({{0}}, {1}, {"a"}), bnp::InvalidArgument);     // arity < 2
  CHECK_THROWS_AS(bnp::Dataset({}, {}, {}), bnp::InvalidArgument);            // n = 0
  CHECK_THROWS_AS(bnp::Dataset({{}}, {2}, {"a"}), bnp::InvalidArgument);      // m = 0
}
