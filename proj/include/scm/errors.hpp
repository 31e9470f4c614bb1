#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace scm {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad argument values: out-of-range epsilon, non-bijective rank vectors, ...
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Two matrices or models of different dimension were combined.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// A model failed a normalization requirement (mass far from 1).
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

// A matrix failed the row/column-sum check, or a decomposition step found no
// perfect matching on the positive support.  Carries a violating row/column
// set when one is known (Hall witness; 1-based indices).
class NotDoublyStochasticError : public Error {
 public:
  explicit NotDoublyStochasticError(const std::string& what,
                                    std::vector<int> witness_rows = {},
                                    std::vector<int> witness_cols = {})
      : Error(what),
        witness_rows_(std::move(witness_rows)),
        witness_cols_(std::move(witness_cols)) {}

  const std::vector<int>& witness_rows() const { return witness_rows_; }
  const std::vector<int>& witness_cols() const { return witness_cols_; }

 private:
  std::vector<int> witness_rows_;
  std::vector<int> witness_cols_;
};

// An iterative method ran out of its iteration budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// An operation that enumerates N! objects was asked for an N past its cutoff.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

// relative_error hit a zero reference entry with a nonzero difference.
// Cell indices are 1-based.
class ZeroReferenceError : public Error {
 public:
  ZeroReferenceError(const std::string& what, int row, int col)
      : Error(what), row_(row), col_(col) {}

  int row() const { return row_; }
  int col() const { return col_; }

 private:
  int row_;
  int col_;
};

// File reading/parsing failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace scm
