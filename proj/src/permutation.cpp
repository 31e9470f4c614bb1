#include "scm/permutation.hpp"

#include <numeric>
#include <sstream>

#include "scm/errors.hpp"

namespace scm::core {

Permutation::Permutation(std::vector<int> ranks) : ranks_(std::move(ranks)) {
  const int n = static_cast<int>(ranks_.size());
  if (n == 0) {
    throw ParameterError("permutation must have at least one item");
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int r : ranks_) {
    if (r < 1 || r > n) {
      throw ParameterError("rank " + std::to_string(r) + " out of range 1.." +
                           std::to_string(n));
    }
    if (seen[static_cast<std::size_t>(r - 1)]) {
      throw ParameterError("rank " + std::to_string(r) +
                           " appears twice; ranks must be a bijection");
    }
    seen[static_cast<std::size_t>(r - 1)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  if (n < 1) throw ParameterError("permutation size must be positive");
  std::vector<int> ranks(static_cast<std::size_t>(n));
  std::iota(ranks.begin(), ranks.end(), 1);
  return Permutation(std::move(ranks));
}

Permutation Permutation::from_string(const std::string& text) {
  std::vector<int> items;  // items[p] = candidate at rank p+1
  if (text.find(',') != std::string::npos) {
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
      try {
        std::size_t used = 0;
        const int value = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        items.push_back(value);
      } catch (const std::exception&) {
        throw ParameterError("bad permutation token '" + token + "' in '" +
                             text + "'");
      }
    }
  } else {
    for (char c : text) {
      if (c < '1' || c > '9') {
        throw ParameterError("bad permutation character '" +
                             std::string(1, c) + "' in '" + text + "'");
      }
      items.push_back(c - '0');
    }
  }
  const int n = static_cast<int>(items.size());
  if (n == 0) throw ParameterError("empty permutation string");
  std::vector<int> ranks(static_cast<std::size_t>(n), 0);
  for (int pos = 1; pos <= n; ++pos) {
    const int item = items[static_cast<std::size_t>(pos - 1)];
    if (item < 1 || item > n) {
      throw ParameterError("candidate " + std::to_string(item) +
                           " out of range in '" + text + "'");
    }
    if (ranks[static_cast<std::size_t>(item - 1)] != 0) {
      throw ParameterError("candidate " + std::to_string(item) +
                           " repeated in '" + text + "'");
    }
    ranks[static_cast<std::size_t>(item - 1)] = pos;
  }
  return Permutation(std::move(ranks));
}

std::string Permutation::to_string() const {
  const int size = n();
  std::string out;
  for (int rank = 1; rank <= size; ++rank) {
    const int item = item_at(rank);
    if (size <= 9) {
      out.push_back(static_cast<char>('0' + item));
    } else {
      if (rank > 1) out.push_back(',');
      out += std::to_string(item);
    }
  }
  return out;
}

int Permutation::rank_of(int item) const {
  if (item < 1 || item > n()) {
    throw ParameterError("item " + std::to_string(item) + " out of range");
  }
  return ranks_[static_cast<std::size_t>(item - 1)];
}

int Permutation::item_at(int rank) const {
  if (rank < 1 || rank > n()) {
    throw ParameterError("rank " + std::to_string(rank) + " out of range");
  }
  for (int i = 0; i < n(); ++i) {
    if (ranks_[static_cast<std::size_t>(i)] == rank) return i + 1;
  }
  throw ParameterError("corrupt permutation");  // unreachable for valid state
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(ranks_.size(), 0);
  for (int i = 0; i < n(); ++i) {
    inv[static_cast<std::size_t>(ranks_[static_cast<std::size_t>(i)] - 1)] =
        i + 1;
  }
  return Permutation(std::move(inv));
}

}  // namespace scm::core
