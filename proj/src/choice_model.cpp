#include "scm/choice_model.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "scm/errors.hpp"

namespace scm::core {

SparseChoiceModel::SparseChoiceModel(int n, std::map<Permutation, double> entries)
    : n_(n), total_mass_(0.0) {
  if (n < 1) throw ParameterError("model dimension must be positive");
  for (auto& [sigma, p] : entries) {
    if (sigma.n() != n) {
      throw DimensionMismatchError(
          "permutation of size " + std::to_string(sigma.n()) +
          " in a model over " + std::to_string(n) + " items");
    }
    if (p < 0.0) {
      throw ParameterError("negative probability " + std::to_string(p) +
                           " for permutation " + sigma.to_string());
    }
    if (p > 0.0) {
      entries_.emplace(sigma, p);
      total_mass_ += p;
    }
  }
}

SparseChoiceModel SparseChoiceModel::point_mass(const Permutation& sigma) {
  std::map<Permutation, double> entries;
  entries.emplace(sigma, 1.0);
  return SparseChoiceModel(sigma.n(), std::move(entries));
}

bool SparseChoiceModel::is_normalized(double tol) const {
  return std::abs(total_mass_ - 1.0) <= tol;
}

SparseChoiceModel SparseChoiceModel::normalized() const {
  if (total_mass_ <= 0.0) {
    throw InvalidModelError("cannot normalize a model with zero total mass");
  }
  return scaled(1.0 / total_mass_);
}

SparseChoiceModel SparseChoiceModel::scaled(double factor) const {
  if (factor <= 0.0) throw ParameterError("scale factor must be positive");
  std::map<Permutation, double> scaled_entries;
  for (const auto& [sigma, p] : entries_) {
    scaled_entries.emplace(sigma, p * factor);
  }
  return SparseChoiceModel(n_, std::move(scaled_entries));
}

double SparseChoiceModel::probability(const Permutation& sigma) const {
  const auto it = entries_.find(sigma);
  return it == entries_.end() ? 0.0 : it->second;
}

}  // namespace scm::core
