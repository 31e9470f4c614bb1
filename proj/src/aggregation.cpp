#include "scm/aggregation.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "scm/errors.hpp"

namespace scm::aggregation {

namespace {

constexpr double kTieTol = 1e-12;

void check_remaining(int n, const std::set<int>& remaining) {
  if (remaining.empty()) {
    throw ParameterError("remaining candidate set is empty");
  }
  for (int c : remaining) {
    if (c < 1 || c > n) {
      throw ParameterError("candidate " + std::to_string(c) +
                           " outside 1.." + std::to_string(n));
    }
  }
}

// best=true: mass as highest-ranked remaining candidate; best=false: lowest.
std::map<int, double> tally(const core::SparseChoiceModel& model,
                            const std::set<int>& remaining, bool best) {
  std::map<int, double> out;
  for (int c : remaining) out[c] = 0.0;
  for (const auto& [sigma, p] : model.entries()) {
    int pick = 0;
    int pick_rank = best ? std::numeric_limits<int>::max() : 0;
    for (int c : remaining) {
      const int r = sigma.rank_of(c);
      if (best ? r < pick_rank : r > pick_rank) {
        pick_rank = r;
        pick = c;
      }
    }
    out[pick] += p;
  }
  return out;
}

}  // namespace

std::map<int, double> first_place_tally(const core::SparseChoiceModel& model,
                                        const std::set<int>& remaining) {
  check_remaining(model.n(), remaining);
  return tally(model, remaining, true);
}

TallyTrace hare(const core::SparseChoiceModel& model) {
  if (model.support_size() == 0) {
    throw InvalidModelError("cannot aggregate a model with empty support");
  }
  const int n = model.n();
  std::set<int> remaining;
  for (int c = 1; c <= n; ++c) remaining.insert(c);

  std::vector<TallyRound> rounds;
  std::vector<int> eliminated_order;
  while (remaining.size() > 1) {
    const auto first = tally(model, remaining, true);
    const auto last = tally(model, remaining, false);

    int victim = 0;
    for (int c : remaining) {
      if (victim == 0) {
        victim = c;
        continue;
      }
      const double fc = first.at(c);
      const double fv = first.at(victim);
      if (fc < fv - kTieTol) {
        victim = c;
      } else if (fc <= fv + kTieTol) {
        const double lc = last.at(c);
        const double lv = last.at(victim);
        if (lc > lv + kTieTol || (lc >= lv - kTieTol && c > victim)) {
          victim = c;
        }
      }
    }

    rounds.push_back(TallyRound{first, victim});
    eliminated_order.push_back(victim);
    remaining.erase(victim);
  }

  const int winner = *remaining.begin();
  std::vector<int> ranks(static_cast<std::size_t>(n), 0);
  ranks[static_cast<std::size_t>(winner - 1)] = 1;
  for (std::size_t j = 0; j < eliminated_order.size(); ++j) {
    ranks[static_cast<std::size_t>(eliminated_order[j] - 1)] =
        n - static_cast<int>(j);
  }
  return TallyTrace{std::move(rounds), winner,
                    core::Permutation(std::move(ranks))};
}

}  // namespace scm::aggregation
