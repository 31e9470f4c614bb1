#pragma once

#include "scm/choice_model.hpp"
#include "scm/matrix.hpp"

namespace scm::apa {

// The bundled five-candidate presidential-election study fixture: first-order
// marginals published as integer percentages, and the six-permutation model
// fitted to them.

// Raw marginal matrix, integer percentages divided by 100.  Rows and columns
// sum to 0.98..1.01, so this is not doubly stochastic as published.
core::Matrix table1();

// Sinkhorn-balanced form of table1().
core::StochasticMatrix table1_normalized();

// The fitted six-permutation model, renormalized (the published probabilities
// sum to 0.999999).
core::SparseChoiceModel model();

}  // namespace scm::apa
