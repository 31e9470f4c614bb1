#include "scm/matrix.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "scm/errors.hpp"

namespace scm::core {

Matrix::Matrix(int n) : n_(n) {
  if (n < 1) throw ParameterError("matrix dimension must be positive");
  v_.assign(static_cast<std::size_t>(n) * n, 0.0);
}

Matrix::Matrix(int n, std::vector<double> values) : n_(n), v_(std::move(values)) {
  if (n < 1) throw ParameterError("matrix dimension must be positive");
  if (v_.size() != static_cast<std::size_t>(n) * n) {
    throw DimensionMismatchError("expected " + std::to_string(n) + "x" +
                                 std::to_string(n) + " = " +
                                 std::to_string(static_cast<long>(n) * n) +
                                 " values, got " + std::to_string(v_.size()));
  }
}

Matrix Matrix::transposed() const {
  Matrix out(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      out.at(j, i) = at(i, j);
    }
  }
  return out;
}

double Matrix::total() const {
  return std::accumulate(v_.begin(), v_.end(), 0.0);
}

namespace {

void validate_doubly_stochastic(const Matrix& m, double tol) {
  std::vector<int> bad_rows;
  std::vector<int> bad_cols;
  for (int i = 0; i < m.n(); ++i) {
    double row = 0.0;
    double col = 0.0;
    for (int j = 0; j < m.n(); ++j) {
      if (m.at(i, j) < -tol) {
        throw NotDoublyStochasticError(
            "negative entry at (" + std::to_string(i + 1) + "," +
            std::to_string(j + 1) + ")");
      }
      row += m.at(i, j);
      col += m.at(j, i);
    }
    if (std::abs(row - 1.0) > tol) bad_rows.push_back(i + 1);
    if (std::abs(col - 1.0) > tol) bad_cols.push_back(i + 1);
  }
  if (!bad_rows.empty() || !bad_cols.empty()) {
    throw NotDoublyStochasticError(
        "row/column sums deviate from 1 beyond tolerance " +
            std::to_string(tol),
        bad_rows, bad_cols);
  }
}

}  // namespace

StochasticMatrix::StochasticMatrix(Matrix m, double tol) : Matrix(std::move(m)) {
  validate_doubly_stochastic(*this, tol);
}

StochasticMatrix::StochasticMatrix(int n, std::vector<double> values, double tol)
    : StochasticMatrix(Matrix(n, std::move(values)), tol) {}

StochasticMatrix StochasticMatrix::uniform(int n) {
  Matrix m(n);
  const double p = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m.at(i, j) = p;
  }
  return StochasticMatrix(std::move(m));
}

StochasticMatrix StochasticMatrix::from_permutation(const Permutation& sigma) {
  Matrix m(sigma.n());
  for (int i = 0; i < sigma.n(); ++i) {
    m.at(i, sigma.rank_of(i + 1) - 1) = 1.0;
  }
  return StochasticMatrix(std::move(m));
}

StochasticMatrix StochasticMatrix::transposed() const {
  return StochasticMatrix(Matrix::transposed());
}

}  // namespace scm::core
