// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epochsim/simulation.hpp"

namespace epochsim {

struct MatrixRow {
  std::uint64_t seed = 0;
  Scenario scenario = Scenario::kS1;
  Fixed oe;
  Fixed eov;
  std::string pattern;  // the relational claim checked for this scenario
  bool holds = false;
};

struct MatrixResult {
  std::vector<MatrixRow> rows;  // seed-major, scenarios s1..s4 within a seed

  // Columns: dataset,scenario,oe,eov,pattern,holds.
  std::string csv() const;
};

// Every scenario under both architectures for each seed (datasets are always
// generated; explicit paths in `base` are ignored). With `parallel` the
// independent runs are distributed over OpenMP threads into preallocated
// slots, so the result is identical to the serial path.
MatrixResult run_matrix(const std::vector<std::uint64_t>& seeds,
                        const ScenarioConfig& base, bool parallel);

}  // namespace epochsim
