#include "scm/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "scm/birkhoff.hpp"
#include "scm/core.hpp"
#include "scm/detail/numeric.hpp"
#include "scm/errors.hpp"

namespace scm::recovery {

namespace {

constexpr double kBig = 1e30;

// Minimum-cost assignment via row-by-row potential updates (Jonker-style
// O(n^3)).  Entries >= kBig/2 mark unusable cells; returns nullopt when every
// complete assignment would use one.
std::optional<std::vector<int>> solve_min_assignment(
    const std::vector<double>& cost, int n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] -
                           u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      if (delta >= kBig / 2) return std::nullopt;
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col_of_row(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) {
    if (p[static_cast<std::size_t>(j)] > 0) {
      col_of_row[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (cost[static_cast<std::size_t>(i) * n +
             static_cast<std::size_t>(col_of_row[static_cast<std::size_t>(i)])] >=
        kBig / 2) {
      return std::nullopt;
    }
  }
  return col_of_row;
}

double assignment_cost(const std::vector<double>& cost, int n,
                       const std::vector<int>& col_of_row) {
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += cost[static_cast<std::size_t>(i) * n +
                  static_cast<std::size_t>(col_of_row[static_cast<std::size_t>(i)])];
  }
  return total;
}

}  // namespace

ConstraintSystem::ConstraintSystem(const core::StochasticMatrix& data,
                                   double eps)
    : d(data), epsilon(eps), n(data.n()) {
  if (eps <= 0.0) throw ParameterError("epsilon must be positive");
}

long mwu_budget(int n, double epsilon) {
  return detail::ceil_snapped(64.0 * std::log(2.0 * n * n) /
                              (epsilon * epsilon));
}

double mwu_step(double epsilon) { return std::min(epsilon / 8.0, 0.5); }

std::optional<OracleResult> assignment_oracle(
    const core::Matrix& weights, std::optional<Cell> fixed,
    const std::vector<Cell>& forbidden) {
  const int n = weights.n();
  const auto check_cell = [n](const Cell& cell, const char* label) {
    if (cell.row < 1 || cell.row > n || cell.col < 1 || cell.col > n) {
      throw ParameterError(std::string(label) + " cell (" +
                           std::to_string(cell.row) + "," +
                           std::to_string(cell.col) + ") out of range");
    }
  };
  if (fixed) check_cell(*fixed, "fixed");
  for (const Cell& cell : forbidden) {
    check_cell(cell, "forbidden");
    if (fixed && cell == *fixed) {
      throw ParameterError("fixed cell is also forbidden");
    }
  }

  std::vector<double> cost(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cost[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)] =
          -weights.at(i, j);
    }
  }
  for (const Cell& cell : forbidden) {
    cost[static_cast<std::size_t>(cell.row - 1) * n +
         static_cast<std::size_t>(cell.col - 1)] = kBig;
  }
  if (fixed) {
    const int fi = fixed->row - 1;
    const int fj = fixed->col - 1;
    for (int j = 0; j < n; ++j) {
      if (j != fj) cost[static_cast<std::size_t>(fi) * n + static_cast<std::size_t>(j)] = kBig;
    }
    for (int i = 0; i < n; ++i) {
      if (i != fi) cost[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(fj)] = kBig;
    }
  }

  const auto base = solve_min_assignment(cost, n);
  if (!base) return std::nullopt;
  const double best_cost = assignment_cost(cost, n, *base);
  const double tol = 1e-9 * std::max(1.0, std::abs(best_cost));

  // Lexicographic refinement: commit the smallest column per row that keeps
  // the optimum attainable, masking committed rows so later solves respect
  // the prefix.
  std::vector<double> masked = cost;
  std::vector<int> chosen(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    bool committed = false;
    for (int j = 0; j < n && !committed; ++j) {
      if (used[static_cast<std::size_t>(j)] ||
          cost[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)] >= kBig / 2) {
        continue;
      }
      std::vector<double> trial = masked;
      for (int jj = 0; jj < n; ++jj) {
        if (jj != j) trial[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(jj)] = kBig;
      }
      const auto solved = solve_min_assignment(trial, n);
      if (solved && assignment_cost(cost, n, *solved) <= best_cost + tol) {
        chosen[static_cast<std::size_t>(i)] = j;
        used[static_cast<std::size_t>(j)] = 1;
        masked = std::move(trial);
        committed = true;
      }
    }
    if (!committed) {
      // Fall back to the unrefined optimum (numerically ties can evade the
      // tolerance); the value is still optimal.
      chosen = *base;
      break;
    }
  }

  std::vector<int> ranks(static_cast<std::size_t>(n));
  double value = 0.0;
  for (int i = 0; i < n; ++i) {
    ranks[static_cast<std::size_t>(i)] = chosen[static_cast<std::size_t>(i)] + 1;
    value += weights.at(i, chosen[static_cast<std::size_t>(i)]);
  }
  return OracleResult{core::Permutation(std::move(ranks)), value};
}

namespace {

struct MwuRun {
  enum class Status { Success, OracleInfeasible, NegativeObjective, VerificationFailed };
  Status status;
  long iterations_run;
  std::optional<RecoveryResult> result;
};

// Shared loop for the signature-constrained and quantized-vector variants:
// fixed_cells[k] constrains column k (and forbids the other columns' cells);
// all-nullopt runs unconstrained columns.
MwuRun run_mwu(const core::StochasticMatrix& d,
               const std::vector<double>& masses,
               const std::vector<std::optional<Cell>>& fixed_cells,
               double epsilon) {
  const int n = d.n();
  const int k = static_cast<int>(masses.size());
  const ConstraintSystem system(d, epsilon);
  const long budget = mwu_budget(n, epsilon);
  const double step = mwu_step(epsilon);

  MWUState state;
  state.p_plus.assign(static_cast<std::size_t>(n) * n, 1.0);
  state.p_minus.assign(static_cast<std::size_t>(n) * n, 1.0);
  state.step = step;
  state.budget = budget;

  std::vector<std::vector<Cell>> forbidden(static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a != b && fixed_cells[static_cast<std::size_t>(b)]) {
        forbidden[static_cast<std::size_t>(a)].push_back(*fixed_cells[static_cast<std::size_t>(b)]);
      }
    }
  }

  std::map<core::Permutation, double> accumulated;
  core::Matrix column_weights(n);
  core::Matrix iterate(n);

  for (long t = 0; t < budget; ++t) {
    state.iterations_run = t + 1;
    iterate = core::Matrix(n);
    double column_total = 0.0;
    std::vector<std::pair<core::Permutation, double>> columns;
    columns.reserve(static_cast<std::size_t>(k));
    for (int col = 0; col < k; ++col) {
      const double mass = masses[static_cast<std::size_t>(col)];
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const std::size_t idx = static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j);
          column_weights.at(i, j) =
              (state.p_plus[idx] - state.p_minus[idx]) * mass;
        }
      }
      const auto solved = assignment_oracle(
          column_weights, fixed_cells[static_cast<std::size_t>(col)],
          forbidden[static_cast<std::size_t>(col)]);
      if (!solved) {
        return {MwuRun::Status::OracleInfeasible, t + 1, std::nullopt};
      }
      column_total += solved->value;
      for (int i = 0; i < n; ++i) {
        iterate.at(i, solved->perm.ranks()[static_cast<std::size_t>(i)] - 1) += mass;
      }
      columns.emplace_back(solved->perm, mass);
    }

    double penalty = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j);
        penalty += state.p_plus[idx] * system.b_plus(i, j) +
                   state.p_minus[idx] * system.b_minus(i, j);
      }
    }
    if (column_total - penalty < 0.0) {
      return {MwuRun::Status::NegativeObjective, t + 1, std::nullopt};
    }

    double weight_total = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j);
        const double z = iterate.at(i, j);
        state.p_plus[idx] *= 1.0 - step * (z - system.b_plus(i, j));
        state.p_minus[idx] *= 1.0 - step * (-z - system.b_minus(i, j));
        if (state.p_plus[idx] <= 0.0 || state.p_minus[idx] <= 0.0) {
          throw Error("multiplicative weight underflow; step size violated");
        }
        weight_total += state.p_plus[idx] + state.p_minus[idx];
      }
    }
    const double scale = static_cast<double>(system.row_count()) / weight_total;
    for (auto& w : state.p_plus) w *= scale;
    for (auto& w : state.p_minus) w *= scale;

    for (const auto& [sigma, mass] : columns) {
      if (mass > 0.0) accumulated[sigma] += mass;
    }
  }

  std::map<core::Permutation, double> averaged;
  for (const auto& [sigma, mass] : accumulated) {
    averaged.emplace(sigma, mass / static_cast<double>(budget));
  }
  core::SparseChoiceModel mixture(n, std::move(averaged));
  const double mass = mixture.total_mass();
  if (mass <= 0.0) {
    return {MwuRun::Status::VerificationFailed, budget, std::nullopt};
  }
  const double unnorm_linf =
      core::distance(core::marginal_matrix(mixture), d, core::Norm::Linf);
  core::SparseChoiceModel model = mixture.normalized();
  const double norm_linf =
      core::distance(core::marginals(model), d, core::Norm::Linf);

  const double slack = 1e-9;
  const bool ok = std::abs(mass - 1.0) <= epsilon + slack &&
                  unnorm_linf <= 2.0 * epsilon + slack &&
                  norm_linf <= 2.0 * epsilon + 2.0 * epsilon * epsilon + slack;
  if (!ok) {
    return {MwuRun::Status::VerificationFailed, budget, std::nullopt};
  }
  RecoveryResult result{std::move(model), mass,        norm_linf,
                        unnorm_linf,      std::nullopt, budget,
                        epsilon};
  return {MwuRun::Status::Success, budget, std::move(result)};
}

void require_mwu_epsilon(double epsilon) {
  if (epsilon <= 0.0 || epsilon >= 0.5) {
    throw ParameterError("epsilon must lie in (0, 1/2)");
  }
}

}  // namespace

std::optional<RecoveryResult> mwu_feasibility(const core::StochasticMatrix& d,
                                              const SignatureSet& sig,
                                              double epsilon) {
  require_mwu_epsilon(epsilon);
  const int n = d.n();
  std::vector<double> masses;
  std::vector<std::optional<Cell>> fixed;
  masses.reserve(sig.cells.size());
  for (const Cell& cell : sig.cells) {
    if (cell.row < 1 || cell.row > n || cell.col < 1 || cell.col > n) {
      throw ParameterError("signature cell out of range");
    }
    masses.push_back(d.at(cell.row - 1, cell.col - 1));
    fixed.emplace_back(cell);
  }
  auto run = run_mwu(d, masses, fixed, epsilon);
  if (run.status != MwuRun::Status::Success) return std::nullopt;
  run.result->signature_set = sig;
  return run.result;
}

std::optional<RecoveryResult> recover(const core::StochasticMatrix& d, int k,
                                      double epsilon) {
  require_mwu_epsilon(epsilon);
  signature::CandidateSignatureSets candidates(d, k, epsilon);
  while (auto sig = candidates.next()) {
    if (auto result = mwu_feasibility(d, *sig, epsilon)) {
      return result;
    }
  }
  return std::nullopt;
}

std::optional<RecoveryResult> recover_search(const core::StochasticMatrix& d,
                                             double epsilon0,
                                             double epsilon_floor) {
  require_mwu_epsilon(epsilon0);
  if (epsilon_floor <= 0.0 || epsilon_floor > epsilon0) {
    throw ParameterError("epsilon floor must lie in (0, epsilon0]");
  }
  const int k_cap = birkhoff::term_bound(d.n());
  for (int k = 1; k <= k_cap; ++k) {
    auto best = recover(d, k, epsilon0);
    if (!best) continue;
    double epsilon = epsilon0 / 2.0;
    while (epsilon >= epsilon_floor * (1.0 - 1e-12)) {
      auto finer = recover(d, k, epsilon);
      if (!finer) break;
      best = std::move(finer);
      epsilon /= 2.0;
    }
    return best;
  }
  return std::nullopt;
}

GreedyFitResult greedy_fit(const core::StochasticMatrix& d, double epsilon) {
  if (epsilon < 0.0) throw ParameterError("epsilon must be >= 0");
  const birkhoff::Decomposition dec = birkhoff::decompose(d);
  auto terms = dec.terms;
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::optional<GreedyFitResult> best;
  std::map<core::Permutation, double> prefix;
  for (const auto& [sigma, w] : terms) {
    prefix[sigma] += w;
    core::SparseChoiceModel model =
        core::SparseChoiceModel(d.n(), prefix).normalized();
    const double err = core::distance(core::marginals(model), d, core::Norm::L2);
    const bool hit = err <= epsilon;
    if (hit || !best || err < best->achieved_l2) {
      const bool holds = signature::check_signature(model).holds;
      best = GreedyFitResult{std::move(model), err, holds};
    }
    if (hit) return *best;
  }
  return *best;  // epsilon unreachable; closest prefix wins
}

std::optional<RecoveryResult> recover_without_signature(
    const core::StochasticMatrix& d, int k, double epsilon,
    NoSignatureStats* stats) {
  require_mwu_epsilon(epsilon);
  if (k < 1) throw ParameterError("k must be positive");
  const double unit = epsilon / k;
  const int max_steps = static_cast<int>(
      std::floor((1.0 + epsilon) / unit + 1e-9));
  if (stats) stats->vectors_enumerated = 0;

  // Nondecreasing step vectors in lexicographic order.
  std::vector<int> steps(static_cast<std::size_t>(k), 1);
  const std::vector<std::optional<Cell>> unconstrained(
      static_cast<std::size_t>(k), std::nullopt);
  while (true) {
    double total = 0.0;
    for (int s : steps) total += s * unit;
    if (total >= 1.0 - epsilon - 1e-12 && total <= 1.0 + epsilon + 1e-12) {
      if (stats) ++stats->vectors_enumerated;
      std::vector<double> masses;
      masses.reserve(static_cast<std::size_t>(k));
      for (int s : steps) masses.push_back(s * unit);
      auto run = run_mwu(d, masses, unconstrained, epsilon);
      if (run.status == MwuRun::Status::Success) {
        return run.result;
      }
    }
    int depth = k - 1;
    while (depth >= 0 && steps[static_cast<std::size_t>(depth)] == max_steps) {
      --depth;
    }
    if (depth < 0) break;
    ++steps[static_cast<std::size_t>(depth)];
    for (int q = depth + 1; q < k; ++q) {
      steps[static_cast<std::size_t>(q)] = steps[static_cast<std::size_t>(depth)];
    }
  }
  return std::nullopt;
}

}  // namespace scm::recovery
