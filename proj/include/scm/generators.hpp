#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "scm/choice_model.hpp"
#include "scm/matrix.hpp"

namespace scm::generators {

// Multinomial-logit (sequential weight) model: positive weight per item.
struct MNLParams {
  explicit MNLParams(std::vector<double> weights);
  std::vector<double> weights;
  int n() const { return static_cast<int>(weights.size()); }
};

// Exponential-family model with an N x N parameter matrix theta.
struct ExpFamParams {
  explicit ExpFamParams(core::Matrix theta);
  core::Matrix theta;
  int n() const { return theta.n(); }
};

// One ranking drawn by filling positions 1..N, each time choosing the next
// item with probability proportional to its weight among unranked items.
core::Permutation mnl_sample(const MNLParams& params, std::mt19937_64& rng);
core::Permutation mnl_sample(const MNLParams& params, std::uint64_t rng_seed);

// Full-support exact distribution by enumerating all N! permutations.
// Limited to N <= 8.
core::SparseChoiceModel exact_distribution(const MNLParams& params);
core::SparseChoiceModel exact_distribution(const ExpFamParams& params);

struct ConditionReport {
  bool satisfied;
  double ratio;
  double threshold;
  std::string detail;
};

// Replaces the default sqrt(log N) factor in the regularity thresholds with
// C * log N / eps^2.
struct AltThreshold {
  double C;
  double eps;
};

// Weight-spread regularity check: with weights sorted ascending and
// L = ceil(N^delta_exponent), tests w_max / sum of the N-L smallest weights
// against sqrt(log N) / N.
ConditionReport condition_check(const MNLParams& params, double delta_exponent,
                                std::optional<AltThreshold> alt = {});

// Parameter-spread check: the extremal ratio
// exp(theta_a + theta_b - theta_c - theta_d) over four distinct cells,
// evaluated in the log domain, tested against sqrt(log N).
ConditionReport condition_check(const ExpFamParams& params,
                                std::optional<AltThreshold> alt = {});

// k distinct uniformly random permutations with probabilities drawn as k
// i.i.d. uniform(0,1) values normalized to sum 1.
core::SparseChoiceModel random_sparse_model(int n, int k,
                                            std::uint64_t rng_seed);

enum class DsMethod { Mixture, Balanced };

// Mixture: marginals of random_sparse_model(n, min(2n, n!), seed).
// Balanced: row/column balancing of an entrywise uniform(0,1) matrix.
core::StochasticMatrix random_doubly_stochastic(int n, std::uint64_t rng_seed,
                                                DsMethod method);

}  // namespace scm::generators
