#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "scm/aggregation.hpp"
#include "scm/apa.hpp"
#include "scm/core.hpp"
#include "scm/errors.hpp"

using namespace scm;
using core::Permutation;
using core::SparseChoiceModel;

namespace {

SparseChoiceModel model_from(
    const std::vector<std::pair<const char*, double>>& entries, int n) {
  std::map<Permutation, double> map;
  for (const auto& [text, mass] : entries) {
    map.emplace(Permutation::from_string(text), mass);
  }
  return SparseChoiceModel(n, map);
}

}  // namespace

TEST_CASE("a point mass elects its own ranking") {
  const Permutation sigma({3, 1, 4, 2});
  const auto trace = aggregation::hare(SparseChoiceModel::point_mass(sigma));
  CHECK(trace.winner == sigma.item_at(1));
  CHECK(trace.ranking == sigma);
  CHECK(trace.rounds.size() == 3);
}

TEST_CASE("first-place tallies restrict to the remaining candidates") {
  const auto model = model_from({{"123", 0.5}, {"231", 0.3}, {"312", 0.2}}, 3);

  const auto full = aggregation::first_place_tally(model, {1, 2, 3});
  CHECK(full.at(1) == doctest::Approx(0.5));
  CHECK(full.at(2) == doctest::Approx(0.3));
  CHECK(full.at(3) == doctest::Approx(0.2));

  // "312" transfers to candidate 1 once 3 is out of the remaining set.
  const auto pair = aggregation::first_place_tally(model, {1, 2});
  CHECK(pair.at(1) == doctest::Approx(0.7));
  CHECK(pair.at(2) == doctest::Approx(0.3));

  const auto solo = aggregation::first_place_tally(model, {2});
  CHECK(solo.size() == 1);
  CHECK(solo.at(2) == doctest::Approx(1.0));

  CHECK_THROWS_AS(aggregation::first_place_tally(model, {}), ParameterError);
  CHECK_THROWS_AS(aggregation::first_place_tally(model, {1, 4}),
                  ParameterError);
}

TEST_CASE("zero-support candidates still appear in the tally") {
  const auto model = model_from({{"12", 1.0}}, 2);
  const auto tally = aggregation::first_place_tally(model, {1, 2});
  CHECK(tally.at(1) == doctest::Approx(1.0));
  CHECK(tally.at(2) == doctest::Approx(0.0));
}

TEST_CASE("each round conserves the total mass") {
  const auto model =
      model_from({{"1234", 0.4}, {"2341", 0.3}, {"3412", 0.2}, {"4123", 0.1}},
                 4);
  const auto trace = aggregation::hare(model);
  for (const auto& round : trace.rounds) {
    double total = 0.0;
    for (const auto& [candidate, mass] : round.first_place) total += mass;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("elimination decisions ignore positive scaling") {
  const auto model =
      model_from({{"132", 0.45}, {"213", 0.35}, {"321", 0.2}}, 3);
  const auto base = aggregation::hare(model);
  const auto scaled = aggregation::hare(model.scaled(2.3));
  CHECK(base.winner == scaled.winner);
  CHECK(base.ranking == scaled.ranking);
  REQUIRE(base.rounds.size() == scaled.rounds.size());
  for (std::size_t r = 0; r < base.rounds.size(); ++r) {
    CHECK(base.rounds[r].eliminated == scaled.rounds[r].eliminated);
  }
}

TEST_CASE("relabeling the candidates relabels the outcome") {
  const auto model =
      model_from({{"123", 0.5}, {"231", 0.3}, {"312", 0.2}}, 3);
  // Swap candidates 1 and 2 in every ranking.
  const auto swapped =
      model_from({{"213", 0.5}, {"132", 0.3}, {"321", 0.2}}, 3);
  const auto base = aggregation::hare(model);
  const auto relabeled = aggregation::hare(swapped);
  const auto map = [](int c) { return c == 1 ? 2 : c == 2 ? 1 : c; };
  CHECK(relabeled.winner == map(base.winner));
  for (int c = 1; c <= 3; ++c) {
    CHECK(relabeled.ranking.rank_of(map(c)) == base.ranking.rank_of(c));
  }
}

TEST_CASE("an empty model cannot be aggregated") {
  CHECK_THROWS_AS(aggregation::hare(SparseChoiceModel(3, {})),
                  InvalidModelError);
}

TEST_CASE("a single candidate wins without any rounds") {
  const auto trace =
      aggregation::hare(SparseChoiceModel::point_mass(Permutation({1})));
  CHECK(trace.winner == 1);
  CHECK(trace.rounds.empty());
  CHECK(trace.ranking == Permutation::identity(1));
}

TEST_CASE("exact first-place ties eliminate the larger index") {
  // Symmetric under swapping candidates 2 and 3, so both their first-place
  // masses (0.25) and last-place masses (0.375) tie exactly.
  const auto model = model_from(
      {{"123", 0.25}, {"132", 0.25}, {"213", 0.125}, {"231", 0.125},
       {"312", 0.125}, {"321", 0.125}},
      3);
  const auto trace = aggregation::hare(model);
  REQUIRE_FALSE(trace.rounds.empty());
  CHECK(trace.rounds[0].eliminated == 3);
}

TEST_CASE("last-place mass breaks ties before the index rule") {
  // Candidates 1 and 2 tie at first place (0.3 each); candidate 1 holds more
  // last-place mass (0.4 vs 0.1), so it is eliminated even though the index
  // rule alone would pick 2.
  const auto model = model_from(
      {{"132", 0.05}, {"123", 0.25}, {"213", 0.25}, {"231", 0.05},
       {"312", 0.05}, {"321", 0.35}},
      3);
  const auto tally = aggregation::first_place_tally(model, {1, 2, 3});
  REQUIRE(tally.at(1) == doctest::Approx(0.3));
  REQUIRE(tally.at(2) == doctest::Approx(0.3));
  const auto trace = aggregation::hare(model);
  CHECK(trace.rounds[0].eliminated == 1);
}

TEST_CASE("the survey model elects candidate one") {
  const auto trace = aggregation::hare(apa::model());
  CHECK(trace.winner == 1);
  CHECK(trace.ranking.to_string() == "13245");

  REQUIRE(trace.rounds.size() == 4);
  CHECK(trace.rounds[0].eliminated == 5);
  CHECK(trace.rounds[1].eliminated == 4);
  CHECK(trace.rounds[2].eliminated == 2);
  CHECK(trace.rounds[3].eliminated == 3);

  const auto& first = trace.rounds[0].first_place;
  CHECK(first.at(1) == doctest::Approx(0.197331).epsilon(2e-6));
  CHECK(first.at(2) == doctest::Approx(0.274196).epsilon(2e-6));
  CHECK(first.at(3) == doctest::Approx(0.202406).epsilon(2e-6));
  CHECK(first.at(4) == doctest::Approx(0.180417).epsilon(2e-6));
  CHECK(first.at(5) == doctest::Approx(0.145649).epsilon(2e-6));

  CHECK(trace.rounds[1].first_place.at(1) ==
        doctest::Approx(0.342980).epsilon(2e-6));
  CHECK(trace.rounds[2].first_place.at(3) ==
        doctest::Approx(0.382823).epsilon(2e-6));
  CHECK(trace.rounds[3].first_place.at(1) ==
        doctest::Approx(0.554970).epsilon(2e-6));
  CHECK(trace.rounds[3].first_place.at(3) ==
        doctest::Approx(0.445029).epsilon(2e-6));
}
