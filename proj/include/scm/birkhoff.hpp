#pragma once

#include <utility>
#include <vector>

#include "scm/matrix.hpp"
#include "scm/permutation.hpp"

namespace scm::birkhoff {

// Convex combination of permutation matrices reproducing a doubly stochastic
// matrix.  residual_norm is the l-infinity norm of input - sum of terms.
struct Decomposition {
  std::vector<std::pair<core::Permutation, double>> terms;
  double residual_norm = 0.0;
};

inline int term_bound(int n) { return (n - 1) * (n - 1) + 1; }

// Greedy peeling: each round finds the perfect matching on entries > tol that
// maximizes its minimum entry (max-bottleneck, ties broken by taking the
// lexicographically smallest matching), emits it with that minimum as weight,
// and subtracts.  Runs until the residual mass drops to tol * N.  The term
// count is reduced to (N-1)^2 + 1 or fewer afterwards if the greedy phase
// overshoots.  Throws NotDoublyStochasticError with a Hall witness when the
// input has no perfect matching on its positive support.
Decomposition decompose(const core::StochasticMatrix& d, double tol = 1e-9);

// Affine-dependency elimination: while more than (n-1)^2 + 1 terms remain,
// finds a combination of terms summing to the zero matrix with zero total
// weight and shifts along it until some weight vanishes.  Marginals and total
// weight are preserved to rounding.
std::vector<std::pair<core::Permutation, double>> reduce_term_count(
    std::vector<std::pair<core::Permutation, double>> terms, int n);

}  // namespace scm::birkhoff
