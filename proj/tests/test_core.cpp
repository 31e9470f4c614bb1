#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "scm/core.hpp"
#include "scm/errors.hpp"
#include "scm/generators.hpp"

using namespace scm;
using core::Matrix;
using core::Permutation;
using core::SparseChoiceModel;
using core::StochasticMatrix;

TEST_CASE("permutation construction validates a bijection") {
  CHECK(Permutation({2, 3, 1}).n() == 3);
  CHECK_THROWS_AS(Permutation({1, 1, 3}), ParameterError);
  CHECK_THROWS_AS(Permutation({0, 1, 2}), ParameterError);
  CHECK_THROWS_AS(Permutation({1, 2, 4}), ParameterError);
  CHECK_THROWS_AS(Permutation({}), ParameterError);
}

TEST_CASE("permutation strings list candidates by rank position") {
  const Permutation p = Permutation::from_string("24153");
  CHECK(p.ranks() == std::vector<int>{3, 1, 5, 2, 4});
  CHECK(p.to_string() == "24153");
  CHECK(p.rank_of(2) == 1);
  CHECK(p.item_at(1) == 2);
  CHECK(p.item_at(5) == 3);

  CHECK(Permutation::from_string("123").ranks() == std::vector<int>{1, 2, 3});
  CHECK(Permutation::from_string("1") == Permutation::identity(1));
  CHECK_THROWS_AS(Permutation::from_string("12a"), ParameterError);
  CHECK_THROWS_AS(Permutation::from_string("122"), ParameterError);
  CHECK_THROWS_AS(Permutation::from_string(""), ParameterError);
}

TEST_CASE("permutations beyond nine items use comma separation") {
  std::vector<int> ranks(10);
  for (int i = 0; i < 10; ++i) ranks[i] = 10 - i;
  const Permutation p(ranks);
  CHECK(p.to_string() == "10,9,8,7,6,5,4,3,2,1");
  CHECK(Permutation::from_string(p.to_string()) == p);
  CHECK(Permutation::from_string("2,1").ranks() == std::vector<int>{2, 1});
}

TEST_CASE("permutation inverse swaps item and rank views") {
  const Permutation p = Permutation::from_string("24153");
  const Permutation q = p.inverse();
  for (int item = 1; item <= 5; ++item) {
    CHECK(q.item_at(item) == p.rank_of(item));
  }
  CHECK(p.inverse().inverse() == p);
}

TEST_CASE("stochastic matrix validation names offending rows and columns") {
  CHECK_NOTHROW(StochasticMatrix::uniform(4));
  CHECK_NOTHROW(StochasticMatrix(2, {0.5, 0.5, 0.5, 0.5}));
  CHECK_THROWS_AS(StochasticMatrix(2, {0.6, 0.5, 0.5, 0.5}),
                  NotDoublyStochasticError);
  CHECK_THROWS_AS(StochasticMatrix(2, {-0.1, 1.1, 1.1, -0.1}),
                  NotDoublyStochasticError);
  try {
    StochasticMatrix(2, {0.9, 0.1, 0.2, 0.8});
    FAIL("expected a validation error");
  } catch (const NotDoublyStochasticError& e) {
    CHECK(e.witness_cols() == std::vector<int>{1, 2});
  }
}

TEST_CASE("permutation matrices and transposes stay doubly stochastic") {
  const auto p = StochasticMatrix::from_permutation(Permutation({2, 3, 1}));
  CHECK(p.at(0, 1) == 1.0);
  CHECK(p.at(1, 2) == 1.0);
  CHECK(p.at(2, 0) == 1.0);
  CHECK(p.total() == doctest::Approx(3.0));
  const StochasticMatrix t = p.transposed();
  CHECK(t.at(1, 0) == 1.0);
}

TEST_CASE("choice models drop zeros and reject negatives") {
  std::map<Permutation, double> entries{
      {Permutation::identity(3), 0.7},
      {Permutation({2, 3, 1}), 0.3},
      {Permutation({3, 1, 2}), 0.0},
  };
  const SparseChoiceModel m(3, entries);
  CHECK(m.support_size() == 2);
  CHECK(m.total_mass() == doctest::Approx(1.0));
  CHECK(m.is_normalized());
  CHECK(m.probability(Permutation({3, 1, 2})) == 0.0);
  CHECK(m.probability(Permutation::identity(3)) == doctest::Approx(0.7));

  entries[Permutation::identity(3)] = -0.1;
  CHECK_THROWS_AS(SparseChoiceModel(3, entries), ParameterError);
  CHECK_THROWS_AS(
      SparseChoiceModel(4, {{Permutation::identity(3), 1.0}}),
      DimensionMismatchError);
}

TEST_CASE("scaling and normalizing track total mass") {
  const auto base = SparseChoiceModel::point_mass(Permutation({2, 1}));
  const auto scaled = base.scaled(0.4);
  CHECK(scaled.total_mass() == doctest::Approx(0.4));
  CHECK_FALSE(scaled.is_normalized());
  CHECK(scaled.normalized().total_mass() == doctest::Approx(1.0));
  CHECK(scaled.normalized().probability(Permutation({2, 1})) ==
        doctest::Approx(1.0));
}

TEST_CASE("point-mass marginals are permutation matrices") {
  const auto model = SparseChoiceModel::point_mass(Permutation({2, 3, 1}));
  const StochasticMatrix m = core::marginals(model);
  CHECK(m.at(0, 1) == 1.0);
  CHECK(m.at(1, 2) == 1.0);
  CHECK(m.at(2, 0) == 1.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK((m.at(i, j) == 0.0 || m.at(i, j) == 1.0));
    }
  }
}

TEST_CASE("uniform model marginals are the uniform matrix") {
  std::map<Permutation, double> entries;
  std::vector<int> ranks{1, 2, 3};
  std::sort(ranks.begin(), ranks.end());
  do {
    entries[Permutation(ranks)] = 1.0 / 6.0;
  } while (std::next_permutation(ranks.begin(), ranks.end()));
  const StochasticMatrix m = core::marginals(SparseChoiceModel(3, entries));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(m.at(i, j) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("marginals require a normalized model") {
  const auto model = SparseChoiceModel::point_mass(Permutation({1, 2})).scaled(0.9);
  CHECK_THROWS_AS(core::marginals(model), InvalidModelError);
  CHECK(core::marginal_matrix(model).at(0, 0) == doctest::Approx(0.9));
}

TEST_CASE("marginals of random models are doubly stochastic and linear") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 3);
    const auto a = generators::random_sparse_model(n, 1 + static_cast<int>(rng() % 5), rng());
    const auto b = generators::random_sparse_model(n, 1 + static_cast<int>(rng() % 5), rng());
    const double alpha = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

    const auto ma = core::marginals(a);
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      double col = 0.0;
      for (int j = 0; j < n; ++j) {
        row += ma.at(i, j);
        col += ma.at(j, i);
      }
      CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(col == doctest::Approx(1.0).epsilon(1e-12));
    }

    std::map<Permutation, double> mix;
    for (const auto& [sigma, p] : a.entries()) mix[sigma] += alpha * p;
    for (const auto& [sigma, p] : b.entries()) mix[sigma] += (1.0 - alpha) * p;
    const auto mm = core::marginals(SparseChoiceModel(n, mix));
    const auto mb = core::marginals(b);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double expected = alpha * ma.at(i, j) + (1.0 - alpha) * mb.at(i, j);
        CHECK(mm.at(i, j) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("distance matches hand-computed norms") {
  const StochasticMatrix id(2, {1, 0, 0, 1});
  const StochasticMatrix swap(2, {0, 1, 1, 0});
  const StochasticMatrix half(2, {0.5, 0.5, 0.5, 0.5});
  CHECK(core::distance(id, id, core::Norm::L2) == 0.0);
  CHECK(core::distance(id, swap, core::Norm::L2) == doctest::Approx(2.0));
  CHECK(core::distance(id, swap, core::Norm::Linf) == doctest::Approx(1.0));
  CHECK(core::distance(half, id, core::Norm::L2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(core::distance(id, StochasticMatrix::uniform(3), core::Norm::L2),
                  DimensionMismatchError);
}

TEST_CASE("distance is symmetric and triangular on random triples") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto a = generators::random_doubly_stochastic(4, seed, generators::DsMethod::Balanced);
    const auto b = generators::random_doubly_stochastic(4, seed + 100, generators::DsMethod::Balanced);
    const auto c = generators::random_doubly_stochastic(4, seed + 200, generators::DsMethod::Balanced);
    for (const auto norm : {core::Norm::L2, core::Norm::Linf}) {
      const double ab = core::distance(a, b, norm);
      const double ba = core::distance(b, a, norm);
      const double bc = core::distance(b, c, norm);
      const double ac = core::distance(a, c, norm);
      CHECK(ab == doctest::Approx(ba));
      CHECK(ac <= ab + bc + 1e-12);
      CHECK(core::distance(a, b, core::Norm::Linf) <=
            core::distance(a, b, core::Norm::L2) + 1e-12);
    }
  }
}

TEST_CASE("relative error exposes both the displayed sum and its mean") {
  const StochasticMatrix ref(2, {0.5, 0.5, 0.5, 0.5});
  const Matrix approx(2, {0.55, 0.55, 0.55, 0.55});
  CHECK(core::relative_error(ref, ref, core::ErrorMode::Sum) == 0.0);
  CHECK(core::relative_error(approx, ref, core::ErrorMode::Sum) ==
        doctest::Approx(0.4));
  CHECK(core::relative_error(approx, ref, core::ErrorMode::Mean) ==
        doctest::Approx(0.1));

  const Matrix zero_ref(2, {1, 0, 0, 1});
  const Matrix differs(2, {1, 0.2, 0.2, 1});
  try {
    core::relative_error(differs, zero_ref, core::ErrorMode::Sum);
    FAIL("expected a zero-reference error");
  } catch (const ZeroReferenceError& e) {
    CHECK(e.row() == 1);
    CHECK(e.col() == 2);
  }
  CHECK(core::relative_error(zero_ref, zero_ref, core::ErrorMode::Sum) == 0.0);
}

TEST_CASE("sinkhorn balancing fixes scalable matrices") {
  const StochasticMatrix already(2, {0.5, 0.5, 0.5, 0.5});
  const auto same = core::sinkhorn_normalize(already);
  CHECK(core::distance(already, same, core::Norm::Linf) == 0.0);

  const auto diag = core::sinkhorn_normalize(Matrix(2, {2, 0, 0, 2}));
  CHECK(diag.at(0, 0) == doctest::Approx(1.0));
  CHECK(diag.at(0, 1) == 0.0);

  const auto skew = core::sinkhorn_normalize(Matrix(2, {1, 1, 1, 3}), 1e-12);
  for (int i = 0; i < 2; ++i) {
    CHECK(skew.at(i, 0) + skew.at(i, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(skew.at(0, i) + skew.at(1, i) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(skew.at(0, 1) == doctest::Approx(skew.at(1, 0)).epsilon(1e-9));

  const auto again = core::sinkhorn_normalize(skew);
  CHECK(core::distance(skew, again, core::Norm::Linf) <= 1e-10);

  CHECK_THROWS_AS(core::sinkhorn_normalize(Matrix(2, {1, 1, 0, 0})),
                  ParameterError);
  CHECK_THROWS_AS(core::sinkhorn_normalize(Matrix(2, {1, -1, 1, 1})),
                  ParameterError);
}

TEST_CASE("perturbation respects the noise bound") {
  const auto d = generators::random_doubly_stochastic(5, 3, generators::DsMethod::Balanced);
  const auto same = core::perturb(d, 0.0, 9);
  CHECK(core::distance(d, same, core::Norm::Linf) == 0.0);

  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto noisy = core::perturb(d, 0.1, seed);
    worst = std::max(worst, core::distance(d, noisy, core::Norm::L2));
    if (seed == 0) {
      const auto replay = core::perturb(d, 0.1, seed);
      CHECK(core::distance(noisy, replay, core::Norm::Linf) == 0.0);
    }
  }
  CHECK(worst <= 0.2);
  CHECK(worst > 0.0);
}
