#pragma once

#include <vector>

#include "scm/permutation.hpp"

namespace scm::core {

// Dense square matrix, row-major.  Indices are 0-based.
class Matrix {
 public:
  explicit Matrix(int n);
  Matrix(int n, std::vector<double> values);

  int n() const { return n_; }

  double at(int i, int j) const { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  double& at(int i, int j) { return v_[static_cast<std::size_t>(i) * n_ + j]; }

  const std::vector<double>& values() const { return v_; }

  Matrix transposed() const;

  double total() const;

 private:
  int n_;
  std::vector<double> v_;
};

// Nonnegative square matrix whose rows and columns each sum to 1 within the
// tolerance given at construction (default 1e-9).
class StochasticMatrix : public Matrix {
 public:
  explicit StochasticMatrix(Matrix m, double tol = 1e-9);
  StochasticMatrix(int n, std::vector<double> values, double tol = 1e-9);

  static StochasticMatrix uniform(int n);
  static StochasticMatrix from_permutation(const Permutation& sigma);

  StochasticMatrix transposed() const;
};

}  // namespace scm::core
