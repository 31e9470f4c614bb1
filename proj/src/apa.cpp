#include "scm/apa.hpp"

#include <map>
#include <utility>
#include <vector>

#include "scm/core.hpp"

namespace scm::apa {

core::Matrix table1() {
  const double p[25] = {
      18, 26, 23, 17, 15,  //
      14, 19, 25, 24, 18,  //
      28, 17, 14, 18, 23,  //
      20, 17, 19, 20, 23,  //
      20, 21, 20, 19, 20,
  };
  std::vector<double> values(p, p + 25);
  for (double& v : values) v /= 100.0;
  return core::Matrix(5, std::move(values));
}

core::StochasticMatrix table1_normalized() {
  return core::sinkhorn_normalize(table1());
}

core::SparseChoiceModel model() {
  const std::pair<const char*, double> listing[] = {
      {"24153", 0.211990}, {"32541", 0.202406}, {"15432", 0.197331},
      {"43215", 0.180417}, {"51324", 0.145649}, {"23154", 0.062206},
  };
  std::map<core::Permutation, double> entries;
  for (const auto& [s, prob] : listing) {
    entries.emplace(core::Permutation::from_string(s), prob);
  }
  return core::SparseChoiceModel(5, std::move(entries)).normalized();
}

}  // namespace scm::apa
