#pragma once

#include <optional>
#include <vector>

#include "scm/choice_model.hpp"
#include "scm/matrix.hpp"
#include "scm/signature.hpp"

namespace scm::recovery {

using signature::Cell;
using signature::SignatureSet;

// The 2N^2-row feasibility system |marginal(z) - d| <= epsilon, split into
// +rows (a z <= d + eps, stored as b_plus = d - eps for the packing form
// a z - b >= 0 ... <= form) and -rows.  Feasible iterates keep every
// a z - b within [-2, 2].
struct ConstraintSystem {
  ConstraintSystem(const core::StochasticMatrix& d, double epsilon);

  core::Matrix d;
  double epsilon;
  int n;

  double b_plus(int i, int j) const { return d.at(i, j) - epsilon; }
  double b_minus(int i, int j) const { return -d.at(i, j) - epsilon; }
  int row_count() const { return 2 * n * n; }
};

// Lagrangian-weight state of the multiplicative-weights loop.
struct MWUState {
  std::vector<double> p_plus;   // one weight per cell, + rows
  std::vector<double> p_minus;  // one weight per cell, - rows
  double step = 0.0;
  long budget = 0;
  long iterations_run = 0;
};

long mwu_budget(int n, double epsilon);  // ceil(64 eps^-2 ln(2 n^2))
double mwu_step(double epsilon);         // min(eps/8, 1/2)

struct OracleResult {
  core::Permutation perm;
  double value;
};

// Maximum-total-weight permutation with sigma(fixed.row) = fixed.col and no
// cell of `forbidden` used; ties resolved toward the lexicographically
// smallest rank vector.  nullopt when no permutation satisfies the
// constraints.  Cells are 1-based.
std::optional<OracleResult> assignment_oracle(
    const core::Matrix& weights, std::optional<Cell> fixed = {},
    const std::vector<Cell>& forbidden = {});

struct RecoveryResult {
  core::SparseChoiceModel model;  // normalized
  double total_mass;              // pre-normalization mixture mass
  double achieved_linf;           // recomputed: |M(model) - d|_inf
  double achieved_linf_unnormalized;
  std::optional<SignatureSet> signature_set;
  long iterations;
  double epsilon_used;
};

// Multiplicative-weights feasibility for one candidate signature set: each
// iteration solves one constrained assignment per signature column (weights
// scaled by the column's data mass, its cell fixed, the other signature
// cells forbidden), declares infeasibility on a negative oracle objective,
// otherwise reweights; the averaged columns form the candidate model.
// Success requires the recomputed un-normalized error <= 2 eps and the
// normalized error <= 2 eps + 2 eps^2.
std::optional<RecoveryResult> mwu_feasibility(const core::StochasticMatrix& d,
                                              const SignatureSet& sig,
                                              double epsilon);

// First success over the candidate signature sets in lexicographic order.
std::optional<RecoveryResult> recover(const core::StochasticMatrix& d, int k,
                                      double epsilon);

// Smallest k (up to (N-1)^2 + 1) succeeding at epsilon0, then epsilon halved
// while recovery keeps succeeding (down to epsilon_floor); best result wins.
std::optional<RecoveryResult> recover_search(const core::StochasticMatrix& d,
                                             double epsilon0,
                                             double epsilon_floor = 1e-3);

struct GreedyFitResult {
  core::SparseChoiceModel model;
  double achieved_l2;
  bool signature_holds;
};

// Heuristic: decompose d, keep the shortest largest-weight prefix whose
// renormalized marginals come within epsilon of d in l2 (or the best prefix
// found when none does).  Carries no feasibility guarantee.
GreedyFitResult greedy_fit(const core::StochasticMatrix& d, double epsilon);

struct NoSignatureStats {
  long vectors_enumerated = 0;
};

// Variant without signature structure: enumerates quantized mass vectors
// (positive multiples of epsilon/k, nondecreasing, total within epsilon of
// 1) and runs the same loop with unconstrained assignment columns.
std::optional<RecoveryResult> recover_without_signature(
    const core::StochasticMatrix& d, int k, double epsilon,
    NoSignatureStats* stats = nullptr);

}  // namespace scm::recovery
