#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "scm/choice_model.hpp"
#include "scm/matrix.hpp"

namespace scm::signature {

// A marginal-matrix cell (item row, rank column), 1-based.
struct Cell {
  int row;
  int col;
  auto operator<=>(const Cell&) const = default;
};

// K distinct cells hypothesized as the support's signature components.
struct SignatureSet {
  explicit SignatureSet(std::vector<Cell> cells);
  std::vector<Cell> cells;
  int k() const { return static_cast<int>(cells.size()); }
};

struct SignatureReport {
  bool holds = false;
  // When the condition holds: each support permutation mapped to its
  // lexicographically first cell hit by no other support permutation.
  std::map<core::Permutation, Cell> witness;
  // Otherwise: the permutations lacking any such cell.
  std::vector<core::Permutation> violations;
};

// Tests whether every support permutation owns at least one cell (i, sigma(i))
// that no other support permutation occupies.
SignatureReport check_signature(const core::SparseChoiceModel& model);

// Lexicographic stream of the K-subsets of the N^2 cells whose data mass
// sums into [1 - epsilon, 1 + epsilon] (inclusive).  Cells are ordered
// row-major; subsets whose partial sums already exceed the upper bound are
// pruned wholesale.  A [begin, end) range over the unfiltered lexicographic
// subset ranks supports sharding across workers.
class CandidateSignatureSets {
 public:
  CandidateSignatureSets(const core::StochasticMatrix& d, int k,
                         double epsilon);
  CandidateSignatureSets(const core::StochasticMatrix& d, int k,
                         double epsilon, std::uint64_t lex_begin,
                         std::uint64_t lex_end);

  // Next passing subset, or nullopt when the stream is exhausted.
  std::optional<SignatureSet> next();

  // C(cell_count, k), saturating.
  static std::uint64_t total_combinations(int cell_count, int k);

 private:
  bool advance_from(int depth);
  bool at_or_past_end() const;

  std::vector<double> cell_values_;
  int n_cells_;
  int k_;
  double lo_;
  double hi_;
  std::vector<int> combo_;
  std::vector<int> end_combo_;  // empty means no upper shard bound
  bool done_ = false;
};

}  // namespace scm::signature
