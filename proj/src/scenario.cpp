// SPDX-License-Identifier: Apache-2.0
#include "epochsim/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include <nlohmann/json.hpp>

namespace epochsim {

using ordered_json = nlohmann::ordered_json;

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kS1: return "s1";
    case Scenario::kS2a: return "s2a";
    case Scenario::kS2b: return "s2b";
    case Scenario::kS3: return "s3";
    case Scenario::kS4: return "s4";
  }
  return "s1";
}

Scenario parse_scenario(const std::string& name) {
  if (name == "s1") return Scenario::kS1;
  if (name == "s2a") return Scenario::kS2a;
  if (name == "s2b") return Scenario::kS2b;
  if (name == "s3") return Scenario::kS3;
  if (name == "s4") return Scenario::kS4;
  throw ConfigError{"unknown scenario \"" + name + "\" (use s1, s2a, s2b, s3, s4)"};
}

std::string architecture_name(Architecture a) {
  return a == Architecture::kOrderExecute ? "oe" : "eov";
}

Architecture parse_architecture(const std::string& name) {
  if (name == "oe") return Architecture::kOrderExecute;
  if (name == "eov") return Architecture::kExecuteOrderValidate;
  throw ConfigError{"unknown architecture \"" + name + "\" (use oe or eov)"};
}

std::vector<FaultSpec> scenario_faults(Scenario s, std::uint64_t rng_seed) {
  const int count = 25 + static_cast<int>(rng_seed % 6);
  FaultSpec spec;
  switch (s) {
    case Scenario::kS1:
      return {};
    case Scenario::kS2a:
      spec.kind = InjectionKind::kSingleNull;
      spec.source = "u2";
      spec.day = 2;
      spec.hour = 2;
      return {spec};
    case Scenario::kS2b:
      spec.kind = InjectionKind::kMultiNull;
      spec.source = "u2";
      spec.count = count;
      spec.seed = rng_seed;
      return {spec};
    case Scenario::kS3:
      spec.kind = InjectionKind::kDuplicateZero;
      spec.source = "u0";
      spec.count = count;
      spec.seed = rng_seed;
      return {spec};
    case Scenario::kS4:
      spec.kind = InjectionKind::kDelay;
      spec.source = "u3";
      spec.days = {3, 11, 16, 25, 27, 30};
      spec.delay_hours = 2;
      return {spec};
  }
  return {};
}

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
    text.remove_prefix(1);
  while (!text.empty() &&
         (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  return text;
}

bool parse_bool(std::string_view value, const std::string& key) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError{"key \"" + key + "\" needs true or false"};
}

std::uint64_t parse_u64(std::string_view value, const std::string& key) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError{"key \"" + key + "\" needs an unsigned integer"};
  return out;
}

int parse_int(std::string_view value, const std::string& key) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError{"key \"" + key + "\" needs an integer"};
  return out;
}

Fixed parse_fixed(std::string_view value, const std::string& key) {
  try {
    return Fixed::parse(std::string(value));
  } catch (const std::invalid_argument&) {
    throw ConfigError{"key \"" + key + "\" needs a decimal number"};
  }
}

void apply_key(ScenarioConfig& config, const std::string& key,
               std::string_view value) {
  if (key == "scenario") {
    config.scenario = parse_scenario(std::string(value));
  } else if (key == "architecture") {
    config.architecture.kind = parse_architecture(std::string(value));
  } else if (key == "dataset_seed") {
    config.dataset_seed = parse_u64(value, key);
  } else if (key == "rng_seed") {
    config.rng_seed = parse_u64(value, key);
  } else if (key == "oe_skip_preexecution") {
    config.architecture.oe_skip_preexecution = parse_bool(value, key);
  } else if (key == "eov_endorser_count") {
    config.architecture.eov_endorser_count = parse_int(value, key);
    if (config.architecture.eov_endorser_count < 1)
      throw ConfigError{"eov_endorser_count must be at least 1"};
  } else if (key == "block_frequency_steps") {
    config.architecture.block_frequency_steps = parse_int(value, key);
    if (config.architecture.block_frequency_steps < 1)
      throw ConfigError{"block_frequency_steps must be at least 1"};
  } else if (key == "parallel_endorsement") {
    config.architecture.parallel_endorsement = parse_bool(value, key);
  } else if (key == "model.base_load") {
    config.model.base_load = parse_fixed(value, key);
  } else if (key == "model.hdd_coefficient") {
    config.model.hdd_coefficient = parse_fixed(value, key);
  } else if (key == "model.base_temperature") {
    config.model.base_temperature = parse_fixed(value, key);
  } else if (key == "voting.tolerance.tau") {
    config.tolerances.tau = parse_fixed(value, key);
  } else if (key == "voting.tolerance.psi") {
    config.tolerances.psi = parse_fixed(value, key);
  } else if (key == "voting.tolerance.rho") {
    config.tolerances.rho = parse_fixed(value, key);
  } else if (key == "voting.weight.u0") {
    config.weights.w[0] = parse_fixed(value, key);
  } else if (key == "voting.weight.u1") {
    config.weights.w[1] = parse_fixed(value, key);
  } else if (key == "voting.weight.u2") {
    config.weights.w[2] = parse_fixed(value, key);
  } else if (key == "dataset.u0") {
    config.paths.u0 = std::string(value);
  } else if (key == "dataset.u1") {
    config.paths.u1 = std::string(value);
  } else if (key == "dataset.u2") {
    config.paths.u2 = std::string(value);
  } else if (key == "dataset.u3") {
    config.paths.u3 = std::string(value);
  } else {
    throw ConfigError{"unknown config key \"" + key + "\""};
  }
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig config;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line = trim(std::string_view(text).substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError{"missing '=' at line " + std::to_string(line_no)};
    std::string key(trim(line.substr(0, eq)));
    apply_key(config, key, trim(line.substr(eq + 1)));
  }
  return config;
}

ScenarioConfig read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError{"cannot open config file " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_to_text(const ScenarioConfig& config) {
  std::ostringstream out;
  out << "scenario = " << scenario_name(config.scenario) << '\n'
      << "architecture = " << architecture_name(config.architecture.kind) << '\n'
      << "dataset_seed = " << config.dataset_seed << '\n'
      << "rng_seed = " << config.rng_seed << '\n'
      << "oe_skip_preexecution = "
      << (config.architecture.oe_skip_preexecution ? "true" : "false") << '\n'
      << "eov_endorser_count = " << config.architecture.eov_endorser_count << '\n'
      << "block_frequency_steps = " << config.architecture.block_frequency_steps
      << '\n'
      << "parallel_endorsement = "
      << (config.architecture.parallel_endorsement ? "true" : "false") << '\n'
      << "model.base_load = " << config.model.base_load.str() << '\n'
      << "model.hdd_coefficient = " << config.model.hdd_coefficient.str() << '\n'
      << "model.base_temperature = " << config.model.base_temperature.str()
      << '\n'
      << "voting.tolerance.tau = " << config.tolerances.tau.str() << '\n'
      << "voting.tolerance.psi = " << config.tolerances.psi.str() << '\n'
      << "voting.tolerance.rho = " << config.tolerances.rho.str() << '\n'
      << "voting.weight.u0 = " << config.weights.w[0].str() << '\n'
      << "voting.weight.u1 = " << config.weights.w[1].str() << '\n'
      << "voting.weight.u2 = " << config.weights.w[2].str() << '\n';
  if (!config.paths.u0.empty()) out << "dataset.u0 = " << config.paths.u0 << '\n';
  if (!config.paths.u1.empty()) out << "dataset.u1 = " << config.paths.u1 << '\n';
  if (!config.paths.u2.empty()) out << "dataset.u2 = " << config.paths.u2 << '\n';
  if (!config.paths.u3.empty()) out << "dataset.u3 = " << config.paths.u3 << '\n';
  return out.str();
}

std::string config_to_json(const ScenarioConfig& config) {
  ordered_json j;
  j["scenario"] = scenario_name(config.scenario);
  j["architecture"] = architecture_name(config.architecture.kind);
  j["dataset_seed"] = config.dataset_seed;
  j["rng_seed"] = config.rng_seed;
  j["oe_skip_preexecution"] = config.architecture.oe_skip_preexecution;
  j["eov_endorser_count"] = config.architecture.eov_endorser_count;
  j["block_frequency_steps"] = config.architecture.block_frequency_steps;
  j["parallel_endorsement"] = config.architecture.parallel_endorsement;
  j["model"] = {{"base_load", config.model.base_load.str()},
                {"hdd_coefficient", config.model.hdd_coefficient.str()},
                {"base_temperature", config.model.base_temperature.str()}};
  j["voting"] = {{"tolerance",
                  {{"tau", config.tolerances.tau.str()},
                   {"psi", config.tolerances.psi.str()},
                   {"rho", config.tolerances.rho.str()}}},
                 {"weights",
                  {config.weights.w[0].str(), config.weights.w[1].str(),
                   config.weights.w[2].str()}}};
  j["datasets"] = {{"u0", config.paths.u0},
                   {"u1", config.paths.u1},
                   {"u2", config.paths.u2},
                   {"u3", config.paths.u3}};
  return j.dump(2);
}

ScenarioConfig config_from_json(const std::string& json_text) {
  try {
    ordered_json j = ordered_json::parse(json_text);
    ScenarioConfig config;
    config.scenario = parse_scenario(j.at("scenario").get<std::string>());
    config.architecture.kind =
        parse_architecture(j.at("architecture").get<std::string>());
    config.dataset_seed = j.at("dataset_seed").get<std::uint64_t>();
    config.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    config.architecture.oe_skip_preexecution =
        j.at("oe_skip_preexecution").get<bool>();
    config.architecture.eov_endorser_count =
        j.at("eov_endorser_count").get<int>();
    config.architecture.block_frequency_steps =
        j.at("block_frequency_steps").get<int>();
    config.architecture.parallel_endorsement =
        j.at("parallel_endorsement").get<bool>();
    const auto& model = j.at("model");
    config.model.base_load = Fixed::parse(model.at("base_load").get<std::string>());
    config.model.hdd_coefficient =
        Fixed::parse(model.at("hdd_coefficient").get<std::string>());
    config.model.base_temperature =
        Fixed::parse(model.at("base_temperature").get<std::string>());
    const auto& tol = j.at("voting").at("tolerance");
    config.tolerances.tau = Fixed::parse(tol.at("tau").get<std::string>());
    config.tolerances.psi = Fixed::parse(tol.at("psi").get<std::string>());
    config.tolerances.rho = Fixed::parse(tol.at("rho").get<std::string>());
    const auto& weights = j.at("voting").at("weights");
    for (int i = 0; i < 3; ++i)
      config.weights.w[static_cast<std::size_t>(i)] =
          Fixed::parse(weights.at(i).get<std::string>());
    const auto& datasets = j.at("datasets");
    config.paths.u0 = datasets.at("u0").get<std::string>();
    config.paths.u1 = datasets.at("u1").get<std::string>();
    config.paths.u2 = datasets.at("u2").get<std::string>();
    config.paths.u3 = datasets.at("u3").get<std::string>();
    return config;
  } catch (const ordered_json::exception& e) {
    throw ConfigError{std::string("bad config json: ") + e.what()};
  } catch (const std::invalid_argument& e) {
    throw ConfigError{std::string("bad config json number: ") + e.what()};
  }
}

}  // namespace epochsim
