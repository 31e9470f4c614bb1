#pragma once

#include <string>

#include "scm/choice_model.hpp"
#include "scm/matrix.hpp"

namespace scm::io {

// Model files: one "<perm-string> <probability>" line per support entry, in
// permutation order, probabilities with six decimal places.  Perm strings are
// concatenated candidate digits by rank position for N <= 9 and
// comma-separated candidates for N > 9.  Parsing skips blank lines and
// '#' comments and does not renormalize.
std::string format_model(const core::SparseChoiceModel& model);
core::SparseChoiceModel parse_model(const std::string& text);

// Matrix files: N comma-separated rows.  Formatting uses shortest
// round-tripping decimals, so format(parse(format(m))) is byte-stable.
std::string format_matrix(const core::Matrix& m);
core::Matrix parse_matrix(const std::string& text);

// Doubly stochastic ingestion: percent entries are divided by 100 and
// Sinkhorn-balanced; otherwise the values must already pass validation.
core::StochasticMatrix parse_stochastic_matrix(const std::string& text,
                                               bool percent = false);

// Ballot files: "<perm-string>,<count>" lines with positive integer counts,
// aggregated into a normalized model.
core::SparseChoiceModel parse_ballots(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace scm::io
