#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace scm::detail {

// Ceiling that first snaps values lying within a relative 1e-9 of an integer,
// so quantities like 8 / 0.4^2 come out as the intended 50 rather than 51.
inline long ceil_snapped(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) {
    return static_cast<long>(r);
  }
  return static_cast<long>(std::ceil(x));
}

// C(n, k) with saturation at the uint64 maximum.
inline std::uint64_t binomial_capped(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (result > cap / num) return cap;
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

// n! saturated at the uint64 maximum (exact through n = 20).
inline std::uint64_t factorial_capped(int n) {
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (int i = 2; i <= n; ++i) {
    if (result > cap / static_cast<std::uint64_t>(i)) return cap;
    result *= static_cast<std::uint64_t>(i);
  }
  return result;
}

}  // namespace scm::detail
