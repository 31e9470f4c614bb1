#include "scm/signature.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "scm/detail/numeric.hpp"
#include "scm/errors.hpp"

namespace scm::signature {

SignatureSet::SignatureSet(std::vector<Cell> c) : cells(std::move(c)) {
  if (cells.empty()) throw ParameterError("signature set must be nonempty");
  std::set<Cell> distinct(cells.begin(), cells.end());
  if (distinct.size() != cells.size()) {
    throw ParameterError("signature cells must be pairwise distinct");
  }
}

SignatureReport check_signature(const core::SparseChoiceModel& model) {
  if (model.support_size() == 0) {
    throw ParameterError("signature check needs a nonempty support");
  }
  const int n = model.n();
  std::vector<int> cover(static_cast<std::size_t>(n) * n, 0);
  for (const auto& [sigma, p] : model.entries()) {
    for (int i = 0; i < n; ++i) {
      ++cover[static_cast<std::size_t>(i) * n +
              static_cast<std::size_t>(sigma.ranks()[static_cast<std::size_t>(i)] - 1)];
    }
  }
  SignatureReport report;
  report.holds = true;
  for (const auto& [sigma, p] : model.entries()) {
    bool found = false;
    for (int i = 0; i < n && !found; ++i) {
      const int j = sigma.ranks()[static_cast<std::size_t>(i)];
      if (cover[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j - 1)] == 1) {
        report.witness.emplace(sigma, Cell{i + 1, j});
        found = true;
      }
    }
    if (!found) {
      report.holds = false;
      report.violations.push_back(sigma);
    }
  }
  if (!report.holds) report.witness.clear();
  return report;
}

CandidateSignatureSets::CandidateSignatureSets(const core::StochasticMatrix& d,
                                               int k, double epsilon)
    : CandidateSignatureSets(d, k, epsilon, 0,
                             total_combinations(d.n() * d.n(), k)) {}

CandidateSignatureSets::CandidateSignatureSets(const core::StochasticMatrix& d,
                                               int k, double epsilon,
                                               std::uint64_t lex_begin,
                                               std::uint64_t lex_end)
    : cell_values_(d.values()),
      n_cells_(d.n() * d.n()),
      k_(k),
      lo_(1.0 - epsilon - 1e-12),
      hi_(1.0 + epsilon + 1e-12) {
  if (k < 1 || k > n_cells_) {
    throw ParameterError("k must lie in 1..N^2; got " + std::to_string(k));
  }
  if (epsilon < 0.0) throw ParameterError("epsilon must be >= 0");

  const std::uint64_t total = total_combinations(n_cells_, k_);
  if (lex_begin > lex_end) throw ParameterError("empty shard bounds reversed");
  if (lex_begin >= total) {
    done_ = true;
    return;
  }

  // Lexicographic unranking of the shard's first subset.
  const auto unrank = [&](std::uint64_t r) {
    std::vector<int> combo(static_cast<std::size_t>(k_));
    int next_value = 0;
    for (int t = 0; t < k_; ++t) {
      for (int v = next_value;; ++v) {
        const std::uint64_t below =
            detail::binomial_capped(n_cells_ - 1 - v, k_ - 1 - t);
        if (r < below) {
          combo[static_cast<std::size_t>(t)] = v;
          next_value = v + 1;
          break;
        }
        r -= below;
      }
    }
    return combo;
  };
  combo_ = unrank(lex_begin);
  if (lex_end < total) end_combo_ = unrank(lex_end);
}

std::uint64_t CandidateSignatureSets::total_combinations(int cell_count,
                                                         int k) {
  return detail::binomial_capped(cell_count, k);
}

bool CandidateSignatureSets::at_or_past_end() const {
  if (end_combo_.empty()) return false;
  return !std::lexicographical_compare(combo_.begin(), combo_.end(),
                                       end_combo_.begin(), end_combo_.end());
}

// Increment combo_[depth], refill the suffix minimally, and carry leftward
// when a position runs out of room.  Returns false when the stream ends.
bool CandidateSignatureSets::advance_from(int depth) {
  while (depth >= 0) {
    ++combo_[static_cast<std::size_t>(depth)];
    if (combo_[static_cast<std::size_t>(depth)] <= n_cells_ - (k_ - depth)) {
      for (int q = depth + 1; q < k_; ++q) {
        combo_[static_cast<std::size_t>(q)] = combo_[static_cast<std::size_t>(q - 1)] + 1;
      }
      return true;
    }
    --depth;
  }
  return false;
}

std::optional<SignatureSet> CandidateSignatureSets::next() {
  while (!done_) {
    if (at_or_past_end()) {
      done_ = true;
      break;
    }
    double sum = 0.0;
    int overflow_depth = -1;
    for (int t = 0; t < k_; ++t) {
      sum += cell_values_[static_cast<std::size_t>(combo_[static_cast<std::size_t>(t)])];
      if (sum > hi_) {
        overflow_depth = t;
        break;
      }
    }
    if (overflow_depth >= 0) {
      // Larger cells at this depth only raise the prefix sum's tail position;
      // still, each advance moves lexicographically forward, so prune by
      // skipping the whole suffix subtree.
      if (!advance_from(overflow_depth)) done_ = true;
      continue;
    }
    const bool pass = sum >= lo_;
    std::optional<SignatureSet> result;
    if (pass) {
      std::vector<Cell> cells;
      cells.reserve(static_cast<std::size_t>(k_));
      const int n = static_cast<int>(std::lround(std::sqrt(n_cells_)));
      for (int t = 0; t < k_; ++t) {
        const int idx = combo_[static_cast<std::size_t>(t)];
        cells.push_back(Cell{idx / n + 1, idx % n + 1});
      }
      result = SignatureSet(std::move(cells));
    }
    if (!advance_from(k_ - 1)) done_ = true;
    if (result) return result;
  }
  return std::nullopt;
}

}  // namespace scm::signature
