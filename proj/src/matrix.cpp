// SPDX-License-Identifier: Apache-2.0
#include "epochsim/matrix.hpp"

#include <array>
#include <exception>
#include <sstream>

namespace epochsim {

namespace {

constexpr std::array<Scenario, 5> kScenarios = {
    Scenario::kS1, Scenario::kS2a, Scenario::kS2b, Scenario::kS3,
    Scenario::kS4};

struct PatternCheck {
  const char* text;
  bool (*holds)(Fixed oe, Fixed eov, Fixed base_oe, Fixed base_eov);
};

PatternCheck pattern_for(Scenario s) {
  switch (s) {
    case Scenario::kS1:
      return {"OE==EOV", [](Fixed oe, Fixed eov, Fixed, Fixed) {
                return oe == eov;
              }};
    case Scenario::kS2a:
      return {"OE!=EOV; both!=baseline; |dOE|>|dEOV|",
              [](Fixed oe, Fixed eov, Fixed base_oe, Fixed base_eov) {
                return oe != eov && oe != base_oe && eov != base_eov &&
                       (oe - base_oe).abs() > (eov - base_eov).abs();
              }};
    case Scenario::kS2b:
      return {"OE!=EOV; both!=baseline",
              [](Fixed oe, Fixed eov, Fixed base_oe, Fixed base_eov) {
                return oe != eov && oe != base_oe && eov != base_eov;
              }};
    case Scenario::kS3:
      return {"EOV==baseline; OE!=baseline",
              [](Fixed oe, Fixed eov, Fixed base_oe, Fixed base_eov) {
                return eov == base_eov && oe != base_oe;
              }};
    case Scenario::kS4:
      return {"OE==EOV; both!=baseline",
              [](Fixed oe, Fixed eov, Fixed base_oe, Fixed base_eov) {
                return oe == eov && oe != base_oe && eov != base_eov;
              }};
  }
  return {"", nullptr};
}

}  // namespace

MatrixResult run_matrix(const std::vector<std::uint64_t>& seeds,
                        const ScenarioConfig& base, bool parallel) {
  const int total = static_cast<int>(seeds.size()) *
                    static_cast<int>(kScenarios.size()) * 2;
  std::vector<Fixed> savings(static_cast<std::size_t>(total));
  std::exception_ptr failure;

  auto run_one = [&](int index) {
    const int arch = index % 2;
    const int scenario = (index / 2) % static_cast<int>(kScenarios.size());
    const int seed = index / 2 / static_cast<int>(kScenarios.size());
    ScenarioConfig config = base;
    config.paths = {};
    config.dataset_seed = seeds[static_cast<std::size_t>(seed)];
    config.rng_seed = config.dataset_seed;
    config.scenario = kScenarios[static_cast<std::size_t>(scenario)];
    config.architecture.kind = arch == 0 ? Architecture::kOrderExecute
                                         : Architecture::kExecuteOrderValidate;
    savings[static_cast<std::size_t>(index)] =
        run_simulation(config).report.monthly_saving;
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < total; ++i) {
      try {
        run_one(i);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  } else {
    for (int i = 0; i < total; ++i) run_one(i);
  }
  if (failure) std::rethrow_exception(failure);

  MatrixResult result;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const std::size_t seed_base = s * kScenarios.size() * 2;
    const Fixed base_oe = savings[seed_base];      // scenario s1, oe
    const Fixed base_eov = savings[seed_base + 1]; // scenario s1, eov
    for (std::size_t i = 0; i < kScenarios.size(); ++i) {
      MatrixRow row;
      row.seed = seeds[s];
      row.scenario = kScenarios[i];
      row.oe = savings[seed_base + i * 2];
      row.eov = savings[seed_base + i * 2 + 1];
      const PatternCheck check = pattern_for(row.scenario);
      row.pattern = check.text;
      row.holds = check.holds(row.oe, row.eov, base_oe, base_eov);
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

std::string MatrixResult::csv() const {
  std::ostringstream out;
  out << "dataset,scenario,oe,eov,pattern,holds\n";
  for (const MatrixRow& row : rows) {
    out << row.seed << ',' << scenario_name(row.scenario) << ','
        << row.oe.str() << ',' << row.eov.str() << ',' << row.pattern << ','
        << (row.holds ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace epochsim
