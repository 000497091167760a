// SPDX-License-Identifier: Apache-2.0
//
// epochsim: seeded dataset generation, fault injection, single scenario
// runs, and the full scenario/architecture comparison matrix.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "epochsim/dataset.hpp"
#include "epochsim/matrix.hpp"
#include "epochsim/simulation.hpp"

namespace fs = std::filesystem;
using namespace epochsim;

namespace {

std::uint64_t env_default_seed() {
  const char* text = std::getenv("EPOCHSIM_SEED");
  if (!text) return 1;
  std::uint64_t seed = 0;
  const char* end = text + std::string_view(text).size();
  auto [ptr, ec] = std::from_chars(text, end, seed);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError{"EPOCHSIM_SEED must be an unsigned integer"};
  return seed;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError{"cannot write " + path.string()};
  out << text;
  out.flush();
  if (!out) throw DatasetError{"cannot write " + path.string()};
}

// Writes every dataset through a temporary name and renames at the end, so a
// failure leaves no partial files behind.
void cmd_generate(std::uint64_t seed, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  std::vector<std::pair<fs::path, std::string>> files;
  const std::vector<WeatherRow> truth =
      generate_weather(seed, WeatherVariant::kTruth);
  files.emplace_back(fs::path(out_dir) / dataset_filename("truth", seed),
                     weather_to_csv(truth));
  const std::array<WeatherVariant, 3> variants = {WeatherVariant::kSource0,
                                                  WeatherVariant::kSource1,
                                                  WeatherVariant::kSource2};
  for (int i = 0; i < 3; ++i)
    files.emplace_back(
        fs::path(out_dir) / dataset_filename(tepc::kSourceIds[static_cast<std::size_t>(i)], seed),
        weather_to_csv(generate_weather(seed, variants[static_cast<std::size_t>(i)])));
  files.emplace_back(
      fs::path(out_dir) / dataset_filename("u3", seed),
      consumption_to_csv(generate_consumption(seed, truth, tepc::PredictorModel{})));

  std::vector<fs::path> temps;
  try {
    for (const auto& [path, text] : files) {
      fs::path temp = path;
      temp += ".tmp";
      write_text_file(temp, text);
      temps.push_back(temp);
    }
    for (std::size_t i = 0; i < files.size(); ++i)
      fs::rename(temps[i], files[i].first);
  } catch (...) {
    for (const fs::path& temp : temps) fs::remove(temp, ec);
    throw;
  }
  for (const auto& [path, text] : files)
    std::cout << path.string() << '\n';
}

void cmd_inject(const std::string& fault_text, const std::string& in_path,
                const std::string& out_path) {
  const FaultSpec spec = FaultSpec::parse(fault_text);
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw DatasetError{"cannot open " + in_path};
  std::string header;
  std::getline(in, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  in.close();

  if (header == "day,hour,temperature,pressure,humidity") {
    std::vector<WeatherRow> rows = read_weather_csv(in_path);
    inject(rows, spec);
    write_weather_csv(out_path, rows);
  } else if (header == "day,hour,consumption_kwh") {
    std::vector<ConsumptionRow> rows = read_consumption_csv(in_path);
    inject(rows, spec);
    write_consumption_csv(out_path, rows);
  } else {
    throw DatasetError{"unrecognized dataset header in " + in_path};
  }
  std::cout << out_path << '\n';
}

void cmd_run(const ScenarioConfig& config, const std::string& report_path) {
  const RunResult result = run_scenario(config);
  write_text_file(report_path, report_to_json(result.report) + "\n");

  const SimReport& report = result.report;
  std::cout << "scenario " << scenario_name(config.scenario) << "  arch "
            << architecture_name(config.architecture.kind) << "  dataset seed "
            << config.dataset_seed << '\n';
  std::cout << "monthly saving " << report.monthly_saving.str()
            << (report.validated ? "  (validated)" : "  (NOT validated)")
            << '\n';
  if (report.baseline_deviation)
    std::cout << "baseline deviation " << report.baseline_deviation->str()
              << '\n';
  std::cout << "receipts:";
  for (const auto& [name, count] : report.receipt_counts)
    std::cout << "  " << name << ' ' << count;
  std::cout << '\n';
  std::cout << "blocks " << report.block_count << "  invalidated "
            << report.invalidated_blocks.size() << '\n';
  std::cout << "report " << report_path << '\n';
}

void cmd_matrix(const std::vector<std::uint64_t>& seeds,
                const std::string& out_dir, bool serial) {
  ScenarioConfig base;
  const MatrixResult result = run_matrix(seeds, base, !serial);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const fs::path out_path = fs::path(out_dir) / "matrix.csv";
  write_text_file(out_path, result.csv());

  std::size_t holding = 0;
  for (const MatrixRow& row : result.rows) holding += row.holds ? 1 : 0;
  std::cout << result.csv();
  std::cout << "patterns holding: " << holding << '/' << result.rows.size()
            << '\n';
  std::cout << "matrix " << out_path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-time simulator comparing order-execute and "
               "execute-order-validate contract processing on an energy "
               "performance contract workload"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Write seeded datasets");
  std::uint64_t gen_seed = 0;
  bool gen_seed_given = false;
  std::string gen_out = ".";
  gen->add_option("--seed", gen_seed, "Dataset seed")
      ->each([&](const std::string&) { gen_seed_given = true; });
  gen->add_option("--out", gen_out, "Output directory");

  auto* inj = app.add_subcommand("inject", "Apply a fault to a dataset file");
  std::string inj_fault, inj_in, inj_out;
  inj->add_option("--fault", inj_fault, "Fault spec, e.g. single_null:source=u2,day=2,hour=2")
      ->required();
  inj->add_option("--in", inj_in, "Input CSV")->required();
  inj->add_option("--out", inj_out, "Output CSV")->required();

  auto* run = app.add_subcommand("run", "Run one scenario to report.json");
  std::string run_scenario_name = "s1", run_arch = "oe", run_config,
              run_report = "report.json";
  std::uint64_t run_seed = 0;
  bool run_seed_given = false, run_scenario_given = false, run_arch_given = false;
  run->add_option("--scenario", run_scenario_name, "s1, s2a, s2b, s3 or s4")
      ->each([&](const std::string&) { run_scenario_given = true; });
  run->add_option("--arch", run_arch, "oe or eov")
      ->each([&](const std::string&) { run_arch_given = true; });
  run->add_option("--seed", run_seed, "Dataset and fault seed")
      ->each([&](const std::string&) { run_seed_given = true; });
  run->add_option("--config", run_config, "Key-value config file");
  run->add_option("--report", run_report, "Report output path");

  auto* mat = app.add_subcommand("matrix", "Run all scenarios and seeds");
  std::vector<std::uint64_t> mat_seeds = {1, 2, 3, 4};
  std::string mat_out = ".";
  bool mat_serial = false;
  mat->add_option("--seeds", mat_seeds, "Comma-separated dataset seeds")
      ->delimiter(',');
  mat->add_option("--out", mat_out, "Output directory");
  mat->add_flag("--serial", mat_serial, "Disable parallel runs");

  try {
    app.parse(argc, argv);

    if (gen->parsed()) {
      cmd_generate(gen_seed_given ? gen_seed : env_default_seed(), gen_out);
    } else if (inj->parsed()) {
      cmd_inject(inj_fault, inj_in, inj_out);
    } else if (run->parsed()) {
      ScenarioConfig config;
      if (!run_config.empty()) config = read_config_file(run_config);
      if (run_scenario_given) config.scenario = parse_scenario(run_scenario_name);
      if (run_arch_given) config.architecture.kind = parse_architecture(run_arch);
      if (run_seed_given) {
        config.dataset_seed = run_seed;
        config.rng_seed = run_seed;
      } else if (run_config.empty()) {
        config.dataset_seed = env_default_seed();
        config.rng_seed = config.dataset_seed;
      }
      cmd_run(config, run_report);
    } else if (mat->parsed()) {
      cmd_matrix(mat_seeds, mat_out, mat_serial);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const DatasetError& e) {
    std::cerr << "error: " << e.message << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.message << '\n';
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.message << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
