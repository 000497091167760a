// SPDX-License-Identifier: Apache-2.0
//
// Times the full scenario matrix on the serial reference path and on the
// OpenMP path, and checks that both produce identical tables.

#include <chrono>
#include <cstdio>

#include "epochsim/matrix.hpp"

using namespace epochsim;

namespace {

double run_timed(const std::vector<std::uint64_t>& seeds, bool parallel,
                 MatrixResult& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = run_matrix(seeds, ScenarioConfig{}, parallel);
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4};

  MatrixResult serial, parallel;
  const double serial_s = run_timed(seeds, false, serial);
  const double parallel_s = run_timed(seeds, true, parallel);
  const bool identical = serial.csv() == parallel.csv();

  std::printf("matrix of %zu runs\n", seeds.size() * 10);
  std::printf("serial    %8.3f s\n", serial_s);
  std::printf("parallel  %8.3f s\n", parallel_s);
  std::printf("speedup   %8.2fx\n", parallel_s > 0 ? serial_s / parallel_s : 0.0);
  std::printf("identical %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
