#pragma once

#include <map>
#include <set>
#include <vector>

#include "scm/choice_model.hpp"
#include "scm/permutation.hpp"

namespace scm::aggregation {

struct TallyRound {
  std::map<int, double> first_place;  // remaining candidate -> mass
  int eliminated = 0;
};

struct TallyTrace {
  std::vector<TallyRound> rounds;  // one per elimination
  int winner = 0;
  core::Permutation ranking;  // winner first, then reverse elimination order
};

// Mass each remaining candidate receives as the highest-ranked remaining
// candidate across the support.  Every remaining candidate appears in the
// result, zero-mass ones included.
std::map<int, double> first_place_tally(const core::SparseChoiceModel& model,
                                        const std::set<int>& remaining);

// Hare (single transferable vote) elimination run to completion.  Each round
// eliminates the candidate with minimum first-place mass; ties go to the
// larger last-place mass, then to the larger candidate index.  Decisions are
// invariant to positive scaling of the model.
TallyTrace hare(const core::SparseChoiceModel& model);

}  // namespace scm::aggregation
