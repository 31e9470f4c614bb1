#pragma once

#include <cstdint>

#include "scm/choice_model.hpp"
#include "scm/matrix.hpp"

namespace scm::core {

enum class Norm { L2, Linf };
enum class ErrorMode { Sum, Mean };

// First-order marginal matrix: M[i][j] = sum of probabilities of permutations
// ranking item i+1 at position j+1.  Requires |total mass - 1| <= 1e-9; the
// model is normalized exactly before accumulation so the result is doubly
// stochastic up to rounding.
StochasticMatrix marginals(const SparseChoiceModel& model);

// Same accumulation without the normalization requirement; row sums equal the
// model's total mass.
Matrix marginal_matrix(const SparseChoiceModel& model);

// Entrywise l2 or l-infinity distance.
double distance(const Matrix& a, const Matrix& b, Norm norm);

// Sum (or per-entry mean) of |approx - ref| / ref.
double relative_error(const Matrix& approx, const Matrix& reference,
                      ErrorMode mode);

// Alternating row/column scaling until all sums are within tol of 1.
// Preserves the zero pattern.
StochasticMatrix sinkhorn_normalize(const Matrix& m, double tol = 1e-12,
                                    int max_iters = 100000);

// Adds an i.i.d. symmetric entrywise perturbation scaled to l2 norm
// noise_bound, clamps negatives, and re-balances.  The noise is halved and
// redrawn-free retried until ||out - in||_2 <= 2 * noise_bound.
StochasticMatrix perturb(const StochasticMatrix& d, double noise_bound,
                         std::uint64_t rng_seed);

}  // namespace scm::core
