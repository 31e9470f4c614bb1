#pragma once

#include <cstddef>
#include <map>

#include "scm/permutation.hpp"

namespace scm::core {

// A finitely supported distribution over permutations of N items.  Entries
// with zero probability are dropped at construction; negative probabilities
// are rejected.  The total mass is kept explicitly so un-normalized mixtures
// (recovery intermediates) are representable; a normalized model has mass 1
// within 1e-12.
class SparseChoiceModel {
 public:
  SparseChoiceModel(int n, std::map<Permutation, double> entries);

  static SparseChoiceModel point_mass(const Permutation& sigma);

  int n() const { return n_; }
  std::size_t support_size() const { return entries_.size(); }
  double total_mass() const { return total_mass_; }

  bool is_normalized(double tol = 1e-12) const;

  SparseChoiceModel normalized() const;
  SparseChoiceModel scaled(double factor) const;

  // Probability of sigma, 0 when outside the support.
  double probability(const Permutation& sigma) const;

  const std::map<Permutation, double>& entries() const { return entries_; }

 private:
  int n_;
  std::map<Permutation, double> entries_;
  double total_mass_;
};

}  // namespace scm::core
