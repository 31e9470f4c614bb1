#include "scm/sparsify.hpp"

#include <map>
#include <random>

#include "scm/birkhoff.hpp"
#include "scm/detail/numeric.hpp"
#include "scm/errors.hpp"

namespace scm::sparsify {

long sample_budget(int n, double epsilon) {
  if (n < 1) throw ParameterError("n must be positive");
  if (epsilon <= 0.0 || epsilon >= 1.0 + 1e-12) {
    throw ParameterError("epsilon must lie in (0, 1]");
  }
  return detail::ceil_snapped(n / (epsilon * epsilon));
}

core::SparseChoiceModel sample_sparsify(const core::StochasticMatrix& d,
                                        double epsilon,
                                        std::uint64_t rng_seed) {
  return sample_sparsify_with_budget(d, sample_budget(d.n(), epsilon),
                                     rng_seed);
}

core::SparseChoiceModel sample_sparsify_with_budget(
    const core::StochasticMatrix& d, long samples, std::uint64_t rng_seed) {
  if (samples < 1) throw ParameterError("sample count must be positive");
  const birkhoff::Decomposition dec = birkhoff::decompose(d);

  std::vector<double> cumulative;
  cumulative.reserve(dec.terms.size());
  double total = 0.0;
  for (const auto& [sigma, w] : dec.terms) {
    total += w;
    cumulative.push_back(total);
  }

  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<core::Permutation> draws;
  draws.reserve(static_cast<std::size_t>(samples));
  for (long t = 0; t < samples; ++t) {
    const double u = unit(rng) * total;
    std::size_t lo = 0;
    std::size_t hi = cumulative.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cumulative[mid] < u) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    draws.push_back(dec.terms[lo].first);
  }
  return empirical_distribution(draws);
}

core::SparseChoiceModel empirical_distribution(
    const std::vector<core::Permutation>& samples) {
  if (samples.empty()) {
    throw ParameterError("empirical distribution of an empty sample");
  }
  const double share = 1.0 / static_cast<double>(samples.size());
  std::map<core::Permutation, double> entries;
  for (const auto& sigma : samples) {
    entries[sigma] += share;
  }
  return core::SparseChoiceModel(samples.front().n(), std::move(entries));
}

}  // namespace scm::sparsify
