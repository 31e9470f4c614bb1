#include "scm/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "scm/core.hpp"
#include "scm/detail/numeric.hpp"
#include "scm/errors.hpp"

namespace scm::generators {

namespace {

constexpr int kEnumerationLimit = 8;

void require_enumerable(int n, const char* op) {
  if (n > kEnumerationLimit) {
    throw SizeLimitError(std::string(op) + " enumerates N! permutations and is"
                         " limited to N <= " +
                         std::to_string(kEnumerationLimit) + "; got N = " +
                         std::to_string(n) + " - use sampling instead");
  }
}

}  // namespace

MNLParams::MNLParams(std::vector<double> w) : weights(std::move(w)) {
  if (weights.empty()) throw ParameterError("weight vector must be nonempty");
  for (double v : weights) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ParameterError("weights must be positive and finite");
    }
  }
}

ExpFamParams::ExpFamParams(core::Matrix t) : theta(std::move(t)) {
  for (double v : theta.values()) {
    if (!std::isfinite(v)) throw ParameterError("theta entries must be finite");
  }
}

core::Permutation mnl_sample(const MNLParams& params, std::mt19937_64& rng) {
  const int n = params.n();
  std::vector<int> remaining(static_cast<std::size_t>(n));
  std::iota(remaining.begin(), remaining.end(), 1);
  std::vector<int> ranks(static_cast<std::size_t>(n), 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int pos = 1; pos <= n; ++pos) {
    double total = 0.0;
    for (int item : remaining) {
      total += params.weights[static_cast<std::size_t>(item - 1)];
    }
    double draw = unit(rng) * total;
    std::size_t chosen = remaining.size() - 1;
    for (std::size_t idx = 0; idx < remaining.size(); ++idx) {
      draw -= params.weights[static_cast<std::size_t>(remaining[idx] - 1)];
      if (draw <= 0.0) {
        chosen = idx;
        break;
      }
    }
    ranks[static_cast<std::size_t>(remaining[chosen] - 1)] = pos;
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(chosen));
  }
  return core::Permutation(std::move(ranks));
}

core::Permutation mnl_sample(const MNLParams& params, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  return mnl_sample(params, rng);
}

core::SparseChoiceModel exact_distribution(const MNLParams& params) {
  const int n = params.n();
  require_enumerable(n, "exact_distribution");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);  // order[p] = item at rank p+1
  std::map<core::Permutation, double> entries;
  double total = 0.0;
  do {
    double p = 1.0;
    double denom = std::accumulate(params.weights.begin(),
                                   params.weights.end(), 0.0);
    for (int pos = 0; pos < n; ++pos) {
      const double w =
          params.weights[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)] - 1)];
      p *= w / denom;
      denom -= w;
    }
    std::vector<int> ranks(static_cast<std::size_t>(n), 0);
    for (int pos = 0; pos < n; ++pos) {
      ranks[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)] - 1)] = pos + 1;
    }
    entries.emplace(core::Permutation(std::move(ranks)), p);
    total += p;
  } while (std::next_permutation(order.begin(), order.end()));
  for (auto& [sigma, p] : entries) p /= total;
  return core::SparseChoiceModel(n, std::move(entries));
}

core::SparseChoiceModel exact_distribution(const ExpFamParams& params) {
  const int n = params.n();
  require_enumerable(n, "exact_distribution");
  std::vector<int> ranks(static_cast<std::size_t>(n));
  std::iota(ranks.begin(), ranks.end(), 1);
  std::vector<std::pair<core::Permutation, double>> log_weights;
  double max_log = -std::numeric_limits<double>::infinity();
  do {
    double lw = 0.0;
    for (int i = 0; i < n; ++i) {
      lw += params.theta.at(i, ranks[static_cast<std::size_t>(i)] - 1);
    }
    log_weights.emplace_back(core::Permutation(ranks), lw);
    max_log = std::max(max_log, lw);
  } while (std::next_permutation(ranks.begin(), ranks.end()));
  double z = 0.0;
  for (const auto& [sigma, lw] : log_weights) z += std::exp(lw - max_log);
  std::map<core::Permutation, double> entries;
  for (const auto& [sigma, lw] : log_weights) {
    entries.emplace(sigma, std::exp(lw - max_log) / z);
  }
  return core::SparseChoiceModel(n, std::move(entries));
}

ConditionReport condition_check(const MNLParams& params, double delta_exponent,
                                std::optional<AltThreshold> alt) {
  if (delta_exponent <= 0.0 || delta_exponent >= 1.0) {
    throw ParameterError("delta exponent must lie in (0, 1)");
  }
  const int n = params.n();
  double raw = std::pow(static_cast<double>(n), delta_exponent);
  const double snapped = std::round(raw);
  if (std::abs(raw - snapped) <= 1e-9 * std::max(1.0, raw)) raw = snapped;
  const int ell = static_cast<int>(std::ceil(raw));
  if (n - ell < 1) {
    throw ParameterError("N - L = " + std::to_string(n - ell) +
                         " leaves no weights to sum; lower delta or raise N");
  }
  std::vector<double> sorted = params.weights;
  std::sort(sorted.begin(), sorted.end());
  double denom = 0.0;
  for (int k = 0; k < n - ell; ++k) denom += sorted[static_cast<std::size_t>(k)];
  const double ratio = sorted.back() / denom;
  const double factor = alt ? alt->C * std::log(static_cast<double>(n)) /
                                  (alt->eps * alt->eps)
                            : std::sqrt(std::log(static_cast<double>(n)));
  const double threshold = factor / n;
  ConditionReport report;
  report.satisfied = ratio <= threshold;
  report.ratio = ratio;
  report.threshold = threshold;
  report.detail = "L=" + std::to_string(ell) + " max-weight/partial-sum=" +
                  std::to_string(ratio) + " threshold=" +
                  std::to_string(threshold);
  return report;
}

ConditionReport condition_check(const ExpFamParams& params,
                                std::optional<AltThreshold> alt) {
  const int n = params.n();
  if (n < 2) throw ParameterError("need at least 2 items (4 distinct cells)");
  std::vector<double> cells = params.theta.values();
  std::sort(cells.begin(), cells.end());
  const std::size_t m = cells.size();
  // Extremal ratio over four distinct cells: two largest against two
  // smallest, evaluated in the log domain.
  const double log_ratio = cells[m - 1] + cells[m - 2] - cells[0] - cells[1];
  const double threshold = alt ? alt->C * std::log(static_cast<double>(n)) /
                                     (alt->eps * alt->eps)
                               : std::sqrt(std::log(static_cast<double>(n)));
  ConditionReport report;
  report.satisfied = log_ratio <= std::log(threshold);
  report.ratio = std::exp(log_ratio);
  report.threshold = threshold;
  report.detail = "extremal four-cell ratio=" + std::to_string(report.ratio) +
                  " threshold=" + std::to_string(threshold);
  return report;
}

core::SparseChoiceModel random_sparse_model(int n, int k,
                                            std::uint64_t rng_seed) {
  if (n < 1) throw ParameterError("n must be positive");
  if (k < 1) throw ParameterError("k must be positive");
  const std::uint64_t limit = detail::factorial_capped(n);
  if (static_cast<std::uint64_t>(k) > limit) {
    throw ParameterError("k = " + std::to_string(k) + " exceeds n! = " +
                         std::to_string(limit));
  }
  std::mt19937_64 rng(rng_seed);
  std::vector<int> ranks(static_cast<std::size_t>(n));
  std::iota(ranks.begin(), ranks.end(), 1);
  std::set<core::Permutation> seen;
  std::vector<core::Permutation> support;
  while (support.size() < static_cast<std::size_t>(k)) {
    std::shuffle(ranks.begin(), ranks.end(), rng);
    core::Permutation sigma{ranks};
    if (seen.insert(sigma).second) support.push_back(std::move(sigma));
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> probs(static_cast<std::size_t>(k));
  double total = 0.0;
  for (auto& p : probs) {
    do {
      p = unit(rng);
    } while (p == 0.0);
    total += p;
  }
  std::map<core::Permutation, double> entries;
  for (std::size_t i = 0; i < support.size(); ++i) {
    entries.emplace(support[i], probs[i] / total);
  }
  return core::SparseChoiceModel(n, std::move(entries));
}

core::StochasticMatrix random_doubly_stochastic(int n, std::uint64_t rng_seed,
                                                DsMethod method) {
  if (n < 1) throw ParameterError("n must be positive");
  if (method == DsMethod::Mixture) {
    const std::uint64_t limit = detail::factorial_capped(n);
    const int k = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(2) * n, limit));
    return core::marginals(random_sparse_model(n, k, rng_seed));
  }
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  core::Matrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v;
      do {
        v = unit(rng);
      } while (v == 0.0);
      m.at(i, j) = v;
    }
  }
  return core::sinkhorn_normalize(m);
}

}  // namespace scm::generators
