#include "scm/cdf.hpp"

#include <charconv>
#include <string>
#include <utility>

#include "scm/errors.hpp"

namespace scm::cdf {

namespace {

core::Permutation from_arrangement(const std::vector<int>& by_position) {
  std::vector<int> ranks(by_position.size());
  for (std::size_t pos = 0; pos < by_position.size(); ++pos) {
    ranks[static_cast<std::size_t>(by_position[pos] - 1)] =
        static_cast<int>(pos) + 1;
  }
  return core::Permutation(std::move(ranks));
}

std::string format_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<core::Permutation> sjt_permutations(int n) {
  if (n < 1) throw ParameterError("n must be positive");
  if (n > 8) {
    throw SizeLimitError("full permutation enumeration is limited to n <= 8");
  }
  std::vector<int> value(static_cast<std::size_t>(n));
  std::vector<int> dir(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) value[static_cast<std::size_t>(i)] = i + 1;

  std::vector<core::Permutation> out;
  out.push_back(from_arrangement(value));
  while (true) {
    int mobile = -1;
    for (int i = 0; i < n; ++i) {
      const int j = i + dir[static_cast<std::size_t>(i)];
      if (j < 0 || j >= n) continue;
      if (value[static_cast<std::size_t>(i)] <
          value[static_cast<std::size_t>(j)]) {
        continue;
      }
      if (mobile == -1 || value[static_cast<std::size_t>(i)] >
                              value[static_cast<std::size_t>(mobile)]) {
        mobile = i;
      }
    }
    if (mobile == -1) break;
    const int target = mobile + dir[static_cast<std::size_t>(mobile)];
    std::swap(value[static_cast<std::size_t>(mobile)],
              value[static_cast<std::size_t>(target)]);
    std::swap(dir[static_cast<std::size_t>(mobile)],
              dir[static_cast<std::size_t>(target)]);
    for (int i = 0; i < n; ++i) {
      if (value[static_cast<std::size_t>(i)] >
          value[static_cast<std::size_t>(target)]) {
        dir[static_cast<std::size_t>(i)] = i < target ? 1 : -1;
      }
    }
    out.push_back(from_arrangement(value));
  }
  return out;
}

std::vector<CdfRow> cdf_compare(const core::SparseChoiceModel& a,
                                const core::SparseChoiceModel& b) {
  if (a.n() != b.n()) {
    throw DimensionMismatchError("models compare different item counts");
  }
  const core::SparseChoiceModel na = a.normalized();
  const core::SparseChoiceModel nb = b.normalized();
  std::vector<CdfRow> rows;
  double sum_a = 0.0;
  double sum_b = 0.0;
  int index = 0;
  for (const core::Permutation& sigma : sjt_permutations(a.n())) {
    sum_a += na.probability(sigma);
    sum_b += nb.probability(sigma);
    rows.push_back(CdfRow{++index, sigma, sum_a, sum_b});
  }
  return rows;
}

std::string format_cdf_csv(const std::vector<CdfRow>& rows) {
  std::string out = "index,permutation,cdf_a,cdf_b\n";
  for (const CdfRow& row : rows) {
    out += std::to_string(row.index);
    out += ',';
    out += row.perm.to_string();
    out += ',';
    out += format_shortest(row.cdf_a);
    out += ',';
    out += format_shortest(row.cdf_b);
    out += '\n';
  }
  return out;
}

}  // namespace scm::cdf
