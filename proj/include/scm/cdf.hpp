#pragma once

#include <string>
#include <vector>

#include "scm/choice_model.hpp"
#include "scm/permutation.hpp"

namespace scm::cdf {

// All N! permutations in Steinhaus-Johnson-Trotter order: consecutive
// entries differ by one adjacent transposition of the rank positions.
// N <= 8 (full enumeration).
std::vector<core::Permutation> sjt_permutations(int n);

struct CdfRow {
  int index;  // 1-based position in the enumeration
  core::Permutation perm;
  double cdf_a;
  double cdf_b;
};

// Running sums of both (normalized) models over the SJT enumeration; the
// last row's values are 1 up to rounding.
std::vector<CdfRow> cdf_compare(const core::SparseChoiceModel& a,
                                const core::SparseChoiceModel& b);

// "index,permutation,cdf_a,cdf_b" header plus one CSV row per permutation.
std::string format_cdf_csv(const std::vector<CdfRow>& rows);

}  // namespace scm::cdf
