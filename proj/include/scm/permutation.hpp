#pragma once

#include <compare>
#include <string>
#include <vector>

namespace scm::core {

// A ranking of N items.  ranks()[i] is the rank sigma(i+1) given to item i+1,
// so values are 1-based while vector indexing is 0-based.
//
// The string form lists candidates by rank position: "24153" means candidate
// 2 holds rank 1, candidate 4 holds rank 2, and so on.  Items beyond 9 use
// comma-separated candidate numbers instead of single digits.
class Permutation {
 public:
  explicit Permutation(std::vector<int> ranks);

  static Permutation identity(int n);
  static Permutation from_string(const std::string& text);

  std::string to_string() const;

  int n() const { return static_cast<int>(ranks_.size()); }

  // Rank of a 1-based item.
  int rank_of(int item) const;
  // 1-based item holding a 1-based rank.
  int item_at(int rank) const;

  Permutation inverse() const;

  const std::vector<int>& ranks() const { return ranks_; }

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> ranks_;
};

}  // namespace scm::core
