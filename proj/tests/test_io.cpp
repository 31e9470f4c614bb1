#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "scm/apa.hpp"
#include "scm/cdf.hpp"
#include "scm/core.hpp"
#include "scm/errors.hpp"
#include "scm/io.hpp"

using namespace scm;
using core::Matrix;
using core::Permutation;
using core::SparseChoiceModel;

TEST_CASE("model text round-trips support and six-decimal probabilities") {
  const SparseChoiceModel model(
      3, {{Permutation({1, 2, 3}), 0.625}, {Permutation({3, 1, 2}), 0.375}});
  const std::string text = io::format_model(model);
  CHECK(text == "123 0.625000\n231 0.375000\n");

  const auto back = io::parse_model(text);
  CHECK(back.support_size() == 2);
  CHECK(back.probability(Permutation({1, 2, 3})) == doctest::Approx(0.625));
  CHECK(io::format_model(back) == text);
}

TEST_CASE("parsing keeps the stated mass instead of renormalizing") {
  const auto partial = io::parse_model("123 0.500000\n");
  CHECK(partial.total_mass() == doctest::Approx(0.5));
  CHECK_FALSE(partial.is_normalized());
}

TEST_CASE("duplicate model lines accumulate") {
  const auto model = io::parse_model("12 0.25\n12 0.5\n21 0.25\n");
  CHECK(model.support_size() == 2);
  CHECK(model.probability(Permutation({1, 2})) == doctest::Approx(0.75));
}

TEST_CASE("wide permutations use the comma form in model files") {
  std::vector<int> ranks(10);
  for (int i = 0; i < 10; ++i) ranks[static_cast<std::size_t>(i)] = 10 - i;
  const SparseChoiceModel model(10, {{Permutation(ranks), 1.0}});
  const std::string text = io::format_model(model);
  CHECK(text == "10,9,8,7,6,5,4,3,2,1 1.000000\n");
  const auto back = io::parse_model(text);
  CHECK(back.probability(Permutation(ranks)) == doctest::Approx(1.0));
}

TEST_CASE("model parse errors carry line numbers") {
  try {
    io::parse_model("123 0.5\n132 not-a-number\n");
    FAIL("expected an IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(io::parse_model("123 -0.5\n"), IoError);
  CHECK_THROWS_AS(io::parse_model("123 0.5\n4321 0.5\n"), IoError);
  CHECK_THROWS_AS(io::parse_model(""), IoError);
  CHECK_THROWS_AS(io::parse_model("# only a comment\n"), IoError);
  CHECK_THROWS_AS(io::parse_model("123\n"), IoError);
}

TEST_CASE("comments and blank lines are skipped in every text format") {
  const auto model =
      io::parse_model("# header\n\n123 0.600000\n\n# tail\n231 0.400000\n");
  CHECK(model.support_size() == 2);

  const auto m = io::parse_matrix("# matrix\n1,0\n\n0,1\n");
  CHECK(m.at(0, 0) == doctest::Approx(1.0));

  const auto ballots = io::parse_ballots("# ballots\n12,1\n");
  CHECK(ballots.total_mass() == doctest::Approx(1.0));
}

TEST_CASE("matrix text is byte-stable across a round trip") {
  Matrix m(3);
  m.at(0, 0) = 0.1;
  m.at(0, 1) = 1.0 / 3.0;
  m.at(0, 2) = 1.0 - 0.1 - 1.0 / 3.0;
  m.at(1, 0) = 0.25;
  m.at(1, 1) = 0.5;
  m.at(1, 2) = 0.25;
  m.at(2, 0) = 1e-17;
  m.at(2, 1) = 0.3;
  m.at(2, 2) = 0.7;
  const std::string text = io::format_matrix(m);
  const auto back = io::parse_matrix(text);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(back.at(i, j) == m.at(i, j));
    }
  }
  CHECK(io::format_matrix(back) == text);
}

TEST_CASE("matrix parsing rejects ragged or non-square input") {
  CHECK_THROWS_AS(io::parse_matrix("1,0\n0\n"), IoError);
  CHECK_THROWS_AS(io::parse_matrix("1,0,0\n0,1,0\n"), IoError);
  CHECK_THROWS_AS(io::parse_matrix("1,x\n0,1\n"), IoError);
  CHECK_THROWS_AS(io::parse_matrix(""), IoError);
}

TEST_CASE("percent tables are rescaled and balanced on ingestion") {
  const std::string table =
      "18,26,23,17,15\n"
      "14,19,25,24,18\n"
      "28,17,14,18,23\n"
      "20,17,19,20,23\n"
      "20,21,20,19,20\n";
  CHECK_THROWS_AS(io::parse_stochastic_matrix(table),
                  NotDoublyStochasticError);

  const auto d = io::parse_stochastic_matrix(table, true);
  for (int i = 0; i < 5; ++i) {
    double row = 0.0;
    double col = 0.0;
    for (int j = 0; j < 5; ++j) {
      row += d.at(i, j);
      col += d.at(j, i);
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(col == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(core::distance(d, apa::table1_normalized(), core::Norm::Linf) <=
        1e-12);
}

TEST_CASE("strict stochastic parsing accepts a valid matrix") {
  const auto d = io::parse_stochastic_matrix("0.5,0.5\n0.5,0.5\n");
  CHECK(d.at(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("ballot counts aggregate into a normalized model") {
  const auto model = io::parse_ballots("123,3\n321,1\n");
  CHECK(model.total_mass() == doctest::Approx(1.0));
  CHECK(model.probability(Permutation({1, 2, 3})) == doctest::Approx(0.75));
  CHECK(model.probability(Permutation({3, 2, 1})) == doctest::Approx(0.25));

  CHECK_THROWS_AS(io::parse_ballots("123,0\n"), IoError);
  CHECK_THROWS_AS(io::parse_ballots("123,-2\n"), IoError);
  CHECK_THROWS_AS(io::parse_ballots("123,1.5\n"), IoError);
  CHECK_THROWS_AS(io::parse_ballots(""), IoError);
}

TEST_CASE("files round-trip through the filesystem helpers") {
  const std::string path = "/tmp/scm_io_round_trip.txt";
  io::write_file(path, "123 1.000000\n");
  CHECK(io::read_file(path) == "123 1.000000\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(io::read_file("/tmp/scm_io_does_not_exist.txt"), IoError);
}

TEST_CASE("the three-item enumeration follows adjacent transpositions") {
  const auto perms = cdf::sjt_permutations(3);
  REQUIRE(perms.size() == 6);
  CHECK(perms[0].to_string() == "123");
  CHECK(perms[1].to_string() == "132");
  CHECK(perms[2].to_string() == "312");
  CHECK(perms[3].to_string() == "321");
  CHECK(perms[4].to_string() == "231");
  CHECK(perms[5].to_string() == "213");
}

TEST_CASE("the four-item enumeration is a complete adjacent-swap walk") {
  const auto perms = cdf::sjt_permutations(4);
  REQUIRE(perms.size() == 24);
  std::set<std::string> seen;
  for (const auto& p : perms) seen.insert(p.to_string());
  CHECK(seen.size() == 24);
  for (std::size_t t = 1; t < perms.size(); ++t) {
    const auto& prev = perms[t - 1];
    const auto& cur = perms[t];
    int first_diff = 0;
    int diffs = 0;
    for (int r = 1; r <= 4; ++r) {
      if (prev.item_at(r) != cur.item_at(r)) {
        ++diffs;
        if (first_diff == 0) first_diff = r;
      }
    }
    CHECK(diffs == 2);
    REQUIRE(first_diff < 4);
    CHECK(prev.item_at(first_diff) == cur.item_at(first_diff + 1));
    CHECK(prev.item_at(first_diff + 1) == cur.item_at(first_diff));
  }
}

TEST_CASE("the enumeration rejects out-of-range sizes") {
  CHECK_THROWS_AS(cdf::sjt_permutations(0), ParameterError);
  CHECK_THROWS_AS(cdf::sjt_permutations(9), SizeLimitError);
}

TEST_CASE("cumulative comparison tracks both models over the enumeration") {
  const SparseChoiceModel a(
      3, {{Permutation({1, 2, 3}), 0.6}, {Permutation({2, 3, 1}), 0.4}});
  const auto rows = cdf::cdf_compare(a, a);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].index == 1);
  CHECK(rows[0].cdf_a == doctest::Approx(0.6));
  for (const auto& row : rows) {
    CHECK(row.cdf_a == doctest::Approx(row.cdf_b));
  }
  CHECK(rows[5].cdf_a == doctest::Approx(1.0).epsilon(1e-9));

  const auto csv = cdf::format_cdf_csv(rows);
  CHECK(csv.rfind("index,permutation,cdf_a,cdf_b\n", 0) == 0);
  CHECK(csv.find("\n1,123,0.6,0.6\n") != std::string::npos);

  CHECK_THROWS_AS(
      cdf::cdf_compare(a, SparseChoiceModel::point_mass(Permutation({1, 2}))),
      DimensionMismatchError);
}

TEST_CASE("unnormalized inputs are normalized before accumulating") {
  const SparseChoiceModel half(2, {{Permutation({1, 2}), 0.5}});
  const auto rows =
      cdf::cdf_compare(half, SparseChoiceModel::point_mass(Permutation({1, 2})));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].cdf_a == doctest::Approx(1.0));
  CHECK(rows[0].cdf_b == doctest::Approx(1.0));
}
