#include "scm/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>
#include <system_error>
#include <vector>

#include "scm/core.hpp"
#include "scm/errors.hpp"

namespace scm::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Content lines with 1-based line numbers; blanks and '#' comments skipped.
std::vector<std::pair<int, std::string_view>> content_lines(
    const std::string& text) {
  std::vector<std::pair<int, std::string_view>> lines;
  std::string_view rest = text;
  int number = 0;
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    std::string_view line =
        nl == std::string_view::npos ? rest : rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    lines.emplace_back(number, line);
  }
  return lines;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw IoError("line " + std::to_string(line) + ": " + what);
}

double parse_real(std::string_view token, int line) {
  token = trim(token);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    fail(line, "expected a number, got \"" + std::string(token) + "\"");
  }
  return value;
}

long long parse_count(std::string_view token, int line) {
  token = trim(token);
  long long value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value <= 0) {
    fail(line, "expected a positive integer count, got \"" +
                   std::string(token) + "\"");
  }
  return value;
}

std::string format_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_probability(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

core::Permutation parse_perm(std::string_view token, int line) {
  try {
    return core::Permutation::from_string(std::string(trim(token)));
  } catch (const Error& e) {
    fail(line, e.what());
  }
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const std::size_t pos = s.find(sep);
    if (pos == std::string_view::npos) {
      out.push_back(s);
      return out;
    }
    out.push_back(s.substr(0, pos));
    s.remove_prefix(pos + 1);
  }
}

}  // namespace

std::string format_model(const core::SparseChoiceModel& model) {
  std::string out;
  for (const auto& [sigma, p] : model.entries()) {
    out += sigma.to_string();
    out += ' ';
    out += format_probability(p);
    out += '\n';
  }
  return out;
}

core::SparseChoiceModel parse_model(const std::string& text) {
  std::map<core::Permutation, double> entries;
  int n = 0;
  for (const auto& [line, body] : content_lines(text)) {
    const std::size_t space = body.find_last_of(" \t");
    if (space == std::string_view::npos) {
      fail(line, "expected \"<permutation> <probability>\"");
    }
    core::Permutation sigma = parse_perm(body.substr(0, space), line);
    const double p = parse_real(body.substr(space + 1), line);
    if (p < 0.0) fail(line, "negative probability");
    if (n == 0) {
      n = sigma.n();
    } else if (sigma.n() != n) {
      fail(line, "permutation size " + std::to_string(sigma.n()) +
                     " does not match earlier size " + std::to_string(n));
    }
    entries[sigma] += p;
  }
  if (n == 0) throw IoError("model file has no entries");
  return core::SparseChoiceModel(n, std::move(entries));
}

std::string format_matrix(const core::Matrix& m) {
  std::string out;
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) {
      if (j) out += ',';
      out += format_shortest(m.at(i, j));
    }
    out += '\n';
  }
  return out;
}

core::Matrix parse_matrix(const std::string& text) {
  const auto lines = content_lines(text);
  const int n = static_cast<int>(lines.size());
  if (n == 0) throw IoError("matrix file has no rows");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& [line, body] : lines) {
    const auto fields = split(body, ',');
    if (static_cast<int>(fields.size()) != n) {
      fail(line, "matrix must be square: " + std::to_string(n) +
                     " rows but this row has " +
                     std::to_string(fields.size()) + " entries");
    }
    for (const auto field : fields) values.push_back(parse_real(field, line));
  }
  return core::Matrix(n, std::move(values));
}

core::StochasticMatrix parse_stochastic_matrix(const std::string& text,
                                               bool percent) {
  core::Matrix m = parse_matrix(text);
  if (percent) {
    for (int i = 0; i < m.n(); ++i) {
      for (int j = 0; j < m.n(); ++j) m.at(i, j) /= 100.0;
    }
    return core::sinkhorn_normalize(m);
  }
  return core::StochasticMatrix(std::move(m));
}

core::SparseChoiceModel parse_ballots(const std::string& text) {
  std::map<core::Permutation, double> counts;
  int n = 0;
  double total = 0.0;
  for (const auto& [line, body] : content_lines(text)) {
    const std::size_t comma = body.find_last_of(',');
    if (comma == std::string_view::npos) {
      fail(line, "expected \"<permutation>,<count>\"");
    }
    core::Permutation sigma = parse_perm(body.substr(0, comma), line);
    const long long count = parse_count(body.substr(comma + 1), line);
    if (n == 0) {
      n = sigma.n();
    } else if (sigma.n() != n) {
      fail(line, "permutation size " + std::to_string(sigma.n()) +
                     " does not match earlier size " + std::to_string(n));
    }
    counts[sigma] += static_cast<double>(count);
    total += static_cast<double>(count);
  }
  if (n == 0) throw IoError("ballot file has no entries");
  for (auto& [sigma, c] : counts) c /= total;
  return core::SparseChoiceModel(n, std::move(counts));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path);
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out.good()) throw IoError("failed writing " + path);
}

}  // namespace scm::io
