// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epochsim/contracts.hpp"
#include "epochsim/dataset.hpp"
#include "epochsim/pipeline.hpp"

namespace epochsim {

// Raised for unreadable or inconsistent run configuration. The CLI maps it
// to exit code 2, like DatasetError.
struct ConfigError {
  std::string message;
};

// The five experiment presets: a clean month, a single null sample, repeated
// null samples, duplicated zero rows, and delayed consumption rows.
enum class Scenario { kS1, kS2a, kS2b, kS3, kS4 };

std::string scenario_name(Scenario s);
Scenario parse_scenario(const std::string& name);

std::string architecture_name(Architecture a);
Architecture parse_architecture(const std::string& name);

// Explicit dataset files. Any empty path falls back to the seeded generator;
// files are taken verbatim, so fault injection is the caller's business.
struct DatasetPaths {
  std::string u0, u1, u2, u3;

  bool any() const { return !(u0.empty() && u1.empty() && u2.empty() && u3.empty()); }
  bool operator==(const DatasetPaths&) const = default;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::kS1;
  ArchitectureConfig architecture;
  std::uint64_t dataset_seed = 1;
  std::uint64_t rng_seed = 1;
  tepc::PredictorModel model;
  tepc::VotingTolerances tolerances;
  tepc::SourceWeights weights;
  DatasetPaths paths;
};

// The fault injections a scenario applies to generated datasets. Counts for
// the repeated faults derive from rng_seed and land in [25, 30].
std::vector<FaultSpec> scenario_faults(Scenario s, std::uint64_t rng_seed);

// Flat key-value config file ("key = value", '#' comments). Unknown keys are
// rejected. parse starts from defaults, so partial files are valid.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig read_config_file(const std::string& path);
std::string config_to_text(const ScenarioConfig& config);

// JSON echo embedded in run reports; round-trips exactly.
std::string config_to_json(const ScenarioConfig& config);
ScenarioConfig config_from_json(const std::string& json_text);

}  // namespace epochsim
