#include "scm/core.hpp"

#include <cmath>
#include <random>
#include <string>

#include "scm/errors.hpp"

namespace scm::core {

Matrix marginal_matrix(const SparseChoiceModel& model) {
  Matrix m(model.n());
  for (const auto& [sigma, p] : model.entries()) {
    for (int i = 0; i < model.n(); ++i) {
      m.at(i, sigma.ranks()[static_cast<std::size_t>(i)] - 1) += p;
    }
  }
  return m;
}

StochasticMatrix marginals(const SparseChoiceModel& model) {
  if (std::abs(model.total_mass() - 1.0) > 1e-9) {
    throw InvalidModelError("model mass " + std::to_string(model.total_mass()) +
                            " deviates from 1 beyond 1e-9");
  }
  return StochasticMatrix(marginal_matrix(model.normalized()));
}

double distance(const Matrix& a, const Matrix& b, Norm norm) {
  if (a.n() != b.n()) {
    throw DimensionMismatchError("distance between " + std::to_string(a.n()) +
                                 "x" + std::to_string(a.n()) + " and " +
                                 std::to_string(b.n()) + "x" +
                                 std::to_string(b.n()) + " matrices");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    const double d = std::abs(a.values()[i] - b.values()[i]);
    if (norm == Norm::L2) {
      acc += d * d;
    } else {
      acc = std::max(acc, d);
    }
  }
  return norm == Norm::L2 ? std::sqrt(acc) : acc;
}

double relative_error(const Matrix& approx, const Matrix& reference,
                      ErrorMode mode) {
  if (approx.n() != reference.n()) {
    throw DimensionMismatchError("relative_error dimension mismatch");
  }
  double sum = 0.0;
  for (int i = 0; i < approx.n(); ++i) {
    for (int j = 0; j < approx.n(); ++j) {
      const double diff = std::abs(approx.at(i, j) - reference.at(i, j));
      if (reference.at(i, j) == 0.0) {
        if (diff != 0.0) {
          throw ZeroReferenceError(
              "zero reference entry with nonzero difference at (" +
                  std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
              i + 1, j + 1);
        }
        continue;
      }
      sum += diff / reference.at(i, j);
    }
  }
  if (mode == ErrorMode::Mean) {
    sum /= static_cast<double>(approx.n()) * approx.n();
  }
  return sum;
}

namespace {

double balance_residual(const Matrix& m) {
  double worst = 0.0;
  for (int i = 0; i < m.n(); ++i) {
    double row = 0.0;
    double col = 0.0;
    for (int j = 0; j < m.n(); ++j) {
      row += m.at(i, j);
      col += m.at(j, i);
    }
    worst = std::max({worst, std::abs(row - 1.0), std::abs(col - 1.0)});
  }
  return worst;
}

}  // namespace

StochasticMatrix sinkhorn_normalize(const Matrix& m, double tol, int max_iters) {
  if (tol <= 0.0) throw ParameterError("tolerance must be positive");
  const int n = m.n();
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    double col = 0.0;
    for (int j = 0; j < n; ++j) {
      if (m.at(i, j) < 0.0) {
        throw ParameterError("negative entry at (" + std::to_string(i + 1) +
                             "," + std::to_string(j + 1) + ")");
      }
      row += m.at(i, j);
      col += m.at(j, i);
    }
    if (row <= 0.0 || col <= 0.0) {
      throw ParameterError("row or column " + std::to_string(i + 1) +
                           " has no positive entry; no scaling exists");
    }
  }

  Matrix work = m;
  double residual = balance_residual(work);
  const double out_tol = std::max(tol, 1e-9);
  if (residual <= tol) return StochasticMatrix(std::move(work), out_tol);

  for (int iter = 0; iter < max_iters; ++iter) {
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) row += work.at(i, j);
      for (int j = 0; j < n; ++j) work.at(i, j) /= row;
    }
    for (int j = 0; j < n; ++j) {
      double col = 0.0;
      for (int i = 0; i < n; ++i) col += work.at(i, j);
      for (int i = 0; i < n; ++i) work.at(i, j) /= col;
    }
    residual = balance_residual(work);
    if (residual <= tol) return StochasticMatrix(std::move(work), out_tol);
  }
  throw ConvergenceError("row/column balancing did not reach tolerance " +
                             std::to_string(tol) + " in " +
                             std::to_string(max_iters) +
                             " iterations; residual " +
                             std::to_string(residual),
                         residual);
}

StochasticMatrix perturb(const StochasticMatrix& d, double noise_bound,
                         std::uint64_t rng_seed) {
  if (noise_bound < 0.0) throw ParameterError("noise bound must be >= 0");
  if (noise_bound == 0.0) return d;

  const int n = d.n();
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Matrix eta(n);
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      eta.at(i, j) = unit(rng);
      norm2 += eta.at(i, j) * eta.at(i, j);
    }
  }
  if (norm2 == 0.0) return d;
  double scale = noise_bound / std::sqrt(norm2);

  // Halve the perturbation until the balanced result stays within twice the
  // noise bound of the input; shrinking toward zero guarantees termination.
  for (int attempt = 0; attempt < 200; ++attempt) {
    Matrix candidate(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        candidate.at(i, j) = std::max(0.0, d.at(i, j) + scale * eta.at(i, j));
      }
    }
    try {
      StochasticMatrix balanced = sinkhorn_normalize(candidate, 1e-12, 100000);
      if (distance(balanced, d, Norm::L2) <= 2.0 * noise_bound) {
        return balanced;
      }
    } catch (const Error&) {
      // clamping destroyed a row/column or balancing stalled; retry smaller
    }
    scale *= 0.5;
  }
  return d;
}

}  // namespace scm::core
