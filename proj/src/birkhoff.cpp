#include "scm/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <set>

#include "scm/errors.hpp"

namespace scm::birkhoff {

namespace {

// Kuhn's augmenting-path matching on an implicit bipartite graph.
// edge(r, c) says whether row r may be matched to column c.
class Matcher {
 public:
  explicit Matcher(int n) : n_(n) {}

  template <typename EdgeFn>
  int max_matching(const EdgeFn& edge) {
    row_of_col_.assign(static_cast<std::size_t>(n_), -1);
    int matched = 0;
    for (int r = 0; r < n_; ++r) {
      seen_.assign(static_cast<std::size_t>(n_), 0);
      if (augment(r, edge)) ++matched;
    }
    return matched;
  }

  // col_of_row from the last max_matching run; -1 for unmatched rows.
  std::vector<int> col_of_row() const {
    std::vector<int> out(static_cast<std::size_t>(n_), -1);
    for (int c = 0; c < n_; ++c) {
      if (row_of_col_[static_cast<std::size_t>(c)] >= 0) {
        out[static_cast<std::size_t>(row_of_col_[static_cast<std::size_t>(c)])] = c;
      }
    }
    return out;
  }

 private:
  template <typename EdgeFn>
  bool augment(int r, const EdgeFn& edge) {
    for (int c = 0; c < n_; ++c) {
      if (!edge(r, c) || seen_[static_cast<std::size_t>(c)]) continue;
      seen_[static_cast<std::size_t>(c)] = 1;
      if (row_of_col_[static_cast<std::size_t>(c)] < 0 ||
          augment(row_of_col_[static_cast<std::size_t>(c)], edge)) {
        row_of_col_[static_cast<std::size_t>(c)] = r;
        return true;
      }
    }
    return false;
  }

  int n_;
  std::vector<int> row_of_col_;
  std::vector<char> seen_;
};

// Hall witness: rows reachable by alternating paths from an unmatched row,
// together with their (smaller) neighborhood.  1-based output.
std::pair<std::vector<int>, std::vector<int>> hall_witness(
    const core::Matrix& m, double tol, const std::vector<int>& col_of_row) {
  const int n = m.n();
  int start = -1;
  for (int r = 0; r < n; ++r) {
    if (col_of_row[static_cast<std::size_t>(r)] < 0) {
      start = r;
      break;
    }
  }
  std::vector<int> row_of_col(static_cast<std::size_t>(n), -1);
  for (int r = 0; r < n; ++r) {
    if (col_of_row[static_cast<std::size_t>(r)] >= 0) {
      row_of_col[static_cast<std::size_t>(col_of_row[static_cast<std::size_t>(r)])] = r;
    }
  }
  std::vector<char> row_seen(static_cast<std::size_t>(n), 0);
  std::vector<char> col_seen(static_cast<std::size_t>(n), 0);
  std::queue<int> frontier;
  frontier.push(start);
  row_seen[static_cast<std::size_t>(start)] = 1;
  while (!frontier.empty()) {
    const int r = frontier.front();
    frontier.pop();
    for (int c = 0; c < n; ++c) {
      if (m.at(r, c) > tol && !col_seen[static_cast<std::size_t>(c)]) {
        col_seen[static_cast<std::size_t>(c)] = 1;
        const int next = row_of_col[static_cast<std::size_t>(c)];
        if (next >= 0 && !row_seen[static_cast<std::size_t>(next)]) {
          row_seen[static_cast<std::size_t>(next)] = 1;
          frontier.push(next);
        }
      }
    }
  }
  std::vector<int> rows;
  std::vector<int> cols;
  for (int r = 0; r < n; ++r) {
    if (row_seen[static_cast<std::size_t>(r)]) rows.push_back(r + 1);
  }
  for (int c = 0; c < n; ++c) {
    if (col_seen[static_cast<std::size_t>(c)]) cols.push_back(c + 1);
  }
  return {rows, cols};
}

struct BottleneckMatching {
  double threshold;
  std::vector<int> col_of_row;
};

// Largest theta such that entries >= theta (and > tol) admit a perfect
// matching, found by binary search over the distinct entry values; the
// matching itself is then made lexicographically smallest in (row, column)
// order by committing columns row by row.
std::optional<BottleneckMatching> max_bottleneck_matching(
    const core::Matrix& m, double tol) {
  const int n = m.n();
  std::set<double> value_set;
  for (double v : m.values()) {
    if (v > tol) value_set.insert(v);
  }
  if (value_set.empty()) return std::nullopt;
  const std::vector<double> values(value_set.begin(), value_set.end());

  Matcher matcher(n);
  const auto feasible = [&](double theta) {
    return matcher.max_matching([&](int r, int c) {
      return m.at(r, c) >= theta && m.at(r, c) > tol;
    }) == n;
  };

  if (!feasible(values.front())) return std::nullopt;
  std::size_t lo = 0;
  std::size_t hi = values.size() - 1;
  while (lo < hi) {  // invariant: values[lo] feasible
    const std::size_t mid = (lo + hi + 1) / 2;
    if (feasible(values[mid])) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  const double theta = values[lo];

  // Lexicographic refinement: for each row in order pick the smallest usable
  // column that still leaves the remaining rows matchable.
  std::vector<int> committed(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (used[static_cast<std::size_t>(c)] || m.at(r, c) < theta ||
          m.at(r, c) <= tol) {
        continue;
      }
      committed[static_cast<std::size_t>(r)] = c;
      used[static_cast<std::size_t>(c)] = 1;
      const int need = n - r - 1;
      const int got = matcher.max_matching([&](int rr, int cc) {
        return rr > r && !used[static_cast<std::size_t>(cc)] &&
               m.at(rr, cc) >= theta && m.at(rr, cc) > tol;
      });
      if (got == need) break;
      committed[static_cast<std::size_t>(r)] = -1;
      used[static_cast<std::size_t>(c)] = 0;
    }
    if (committed[static_cast<std::size_t>(r)] < 0) return std::nullopt;  // unreachable
  }
  return BottleneckMatching{theta, std::move(committed)};
}

core::Permutation matching_to_permutation(const std::vector<int>& col_of_row) {
  std::vector<int> ranks(col_of_row.size());
  for (std::size_t i = 0; i < col_of_row.size(); ++i) {
    ranks[i] = col_of_row[i] + 1;
  }
  return core::Permutation(std::move(ranks));
}

}  // namespace

Decomposition decompose(const core::StochasticMatrix& d, double tol) {
  if (tol <= 0.0) throw ParameterError("tolerance must be positive");
  const int n = d.n();
  core::Matrix residual = d;
  Decomposition out;

  const int max_rounds = n * n + 2;
  for (int round = 0; round < max_rounds; ++round) {
    if (residual.total() <= tol * n) break;
    const auto matching = max_bottleneck_matching(residual, tol);
    if (!matching) {
      if (round == 0) {
        Matcher matcher(n);
        matcher.max_matching(
            [&](int r, int c) { return residual.at(r, c) > tol; });
        auto [rows, cols] = hall_witness(residual, tol, matcher.col_of_row());
        throw NotDoublyStochasticError(
            "no perfect matching on entries above " + std::to_string(tol) +
                ": " + std::to_string(rows.size()) +
                " rows see only " + std::to_string(cols.size()) + " columns",
            rows, cols);
      }
      break;  // sub-tolerance crumbs left; reported through residual_norm
    }
    double weight = residual.at(0, matching->col_of_row[0]);
    for (int i = 1; i < n; ++i) {
      weight = std::min(weight,
                        residual.at(i, matching->col_of_row[static_cast<std::size_t>(i)]));
    }
    for (int i = 0; i < n; ++i) {
      residual.at(i, matching->col_of_row[static_cast<std::size_t>(i)]) -= weight;
    }
    out.terms.emplace_back(matching_to_permutation(matching->col_of_row),
                           weight);
  }

  if (static_cast<int>(out.terms.size()) > term_bound(n)) {
    out.terms = reduce_term_count(std::move(out.terms), n);
  }

  // The residual is exactly d minus the emitted terms as long as no reduction
  // ran; recompute from scratch so the reported norm is always honest.
  core::Matrix recon(n);
  for (const auto& [sigma, w] : out.terms) {
    for (int i = 0; i < n; ++i) {
      recon.at(i, sigma.ranks()[static_cast<std::size_t>(i)] - 1) += w;
    }
  }
  double linf = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      linf = std::max(linf, std::abs(d.at(i, j) - recon.at(i, j)));
    }
  }
  out.residual_norm = linf;
  return out;
}

std::vector<std::pair<core::Permutation, double>> reduce_term_count(
    std::vector<std::pair<core::Permutation, double>> terms, int n) {
  const int bound = term_bound(n);
  while (static_cast<int>(terms.size()) > bound) {
    const std::size_t m = terms.size();
    const std::size_t rows = static_cast<std::size_t>(n) * n + 1;
    // Columns are [vec(P_t); 1]; a null vector c gives sum c_t P_t = 0 with
    // sum c_t = 0, so weights can shift along c without changing anything
    // the decomposition represents.
    std::vector<std::vector<double>> a(rows, std::vector<double>(m, 0.0));
    for (std::size_t t = 0; t < m; ++t) {
      const auto& ranks = terms[t].first.ranks();
      for (int i = 0; i < n; ++i) {
        a[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(ranks[static_cast<std::size_t>(i)] - 1)][t] = 1.0;
      }
      a[rows - 1][t] = 1.0;
    }

    // Gaussian elimination with partial pivoting; record pivot columns.
    std::vector<int> pivot_col_of_row(rows, -1);
    std::vector<char> is_pivot(m, 0);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m && rank < rows; ++col) {
      std::size_t best = rank;
      for (std::size_t r = rank; r < rows; ++r) {
        if (std::abs(a[r][col]) > std::abs(a[best][col])) best = r;
      }
      if (std::abs(a[best][col]) < 1e-12) continue;
      std::swap(a[rank], a[best]);
      const double pivot = a[rank][col];
      for (std::size_t c = col; c < m; ++c) a[rank][c] /= pivot;
      for (std::size_t r = 0; r < rows; ++r) {
        if (r == rank) continue;
        const double factor = a[r][col];
        if (factor == 0.0) continue;
        for (std::size_t c = col; c < m; ++c) a[r][c] -= factor * a[rank][c];
      }
      pivot_col_of_row[rank] = static_cast<int>(col);
      is_pivot[col] = 1;
      ++rank;
    }

    std::size_t free_col = m;
    for (std::size_t col = 0; col < m; ++col) {
      if (!is_pivot[col]) {
        free_col = col;
        break;
      }
    }
    if (free_col == m) break;  // full column rank; nothing to eliminate

    std::vector<double> c(m, 0.0);
    c[free_col] = 1.0;
    for (std::size_t r = 0; r < rank; ++r) {
      c[static_cast<std::size_t>(pivot_col_of_row[r])] = -a[r][free_col];
    }

    bool has_positive = false;
    for (double v : c) {
      if (v > 0.0) {
        has_positive = true;
        break;
      }
    }
    if (!has_positive) {
      for (double& v : c) v = -v;
    }
    double gamma = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < m; ++t) {
      if (c[t] > 1e-12) gamma = std::min(gamma, terms[t].second / c[t]);
    }
    if (!std::isfinite(gamma)) break;

    std::vector<std::pair<core::Permutation, double>> next;
    next.reserve(m - 1);
    for (std::size_t t = 0; t < m; ++t) {
      const double w = terms[t].second - gamma * c[t];
      if (w > 1e-14) next.emplace_back(std::move(terms[t].first), w);
    }
    if (next.size() >= terms.size()) break;  // no progress; stop defensively
    terms = std::move(next);
  }
  return terms;
}

}  // namespace scm::birkhoff
