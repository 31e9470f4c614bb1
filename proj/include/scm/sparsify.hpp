#pragma once

#include <cstdint>
#include <vector>

#include "scm/choice_model.hpp"
#include "scm/matrix.hpp"

namespace scm::sparsify {

// Sample count ceil(N / epsilon^2) for the sampling sparsifier.
long sample_budget(int n, double epsilon);

// Decomposes d into a consistent model, draws sample_budget(N, epsilon)
// i.i.d. permutations from it, and returns their empirical distribution.
// Support is at most the sample count, every probability is a multiple of
// 1/T, and the expected squared l2 marginal error is at most N/T.
core::SparseChoiceModel sample_sparsify(const core::StochasticMatrix& d,
                                        double epsilon,
                                        std::uint64_t rng_seed);

// Same with an explicit sample count (e.g. the 4N/epsilon^2 preset that
// brings the failure probability below 1/4).
core::SparseChoiceModel sample_sparsify_with_budget(
    const core::StochasticMatrix& d, long samples, std::uint64_t rng_seed);

// Multiplicity / T for each distinct permutation in the draw.
core::SparseChoiceModel empirical_distribution(
    const std::vector<core::Permutation>& samples);

}  // namespace scm::sparsify
