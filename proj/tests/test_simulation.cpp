// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "epochsim/simulation.hpp"

namespace {

using namespace epochsim;

WeatherRow wrow(int day, int hour, const char* t, const char* p,
                const char* h) {
  return WeatherRow{day, hour, Fixed::parse(t), Fixed::parse(p),
                    Fixed::parse(h)};
}

}  // namespace

TEST_CASE("clock maps datetimes to steps and back") {
  CHECK(SimulationClock::step_of(1, 0) == 0);
  CHECK(SimulationClock::step_of(2, 0) == SimulationClock::kMonthBeginStep);
  CHECK(SimulationClock::step_of(2, 5) == 29);
  CHECK(SimulationClock::step_of(3, 0) == SimulationClock::kFirstMidnightStep);
  CHECK(SimulationClock::step_of(31, 23) == 743);
  CHECK(SimulationClock::kEndStep == 744);
  for (int day = 1; day <= 31; ++day) {
    for (int hour = 0; hour < 24; ++hour) {
      const std::uint64_t step = SimulationClock::step_of(day, hour);
      CHECK(SimulationClock::day_of_month(step) == day);
      CHECK(SimulationClock::hour_of_day(step) == hour);
    }
  }
}

TEST_CASE("oracle is silent before the first midnight") {
  for (std::uint64_t step : {0, 12, 16, 24, 25, 47}) {
    CHECK(oracle_tick(step).empty());
  }
}

TEST_CASE("oracle closes each finished day at midnight") {
  const auto txs = oracle_tick(48);
  REQUIRE(txs.size() == 1);
  const Transaction& tx = txs[0];
  CHECK(tx.proposer == tepc::oracle_address());
  CHECK(tx.target == tepc::contract_address(tepc::kDataQualifier));
  CHECK(tx.method == "midnightProcess");
  REQUIRE(tx.args.size() == 1);
  CHECK(tx.args[0] == Value(Fixed::from_int(2)));
  CHECK(tx.proposed_at_step == 48);

  CHECK(oracle_tick(49).empty());
  const auto next_day = oracle_tick(72);
  REQUIRE(next_day.size() == 1);
  CHECK(next_day[0].args[0] == Value(Fixed::from_int(3)));
}

TEST_CASE("month end precedes the final midnight") {
  const auto txs = oracle_tick(SimulationClock::kEndStep);
  REQUIRE(txs.size() == 2);
  CHECK(txs[0].method == "monthEndProcess");
  CHECK(txs[0].args.empty());
  CHECK(txs[1].method == "midnightProcess");
  REQUIRE(txs[1].args.size() == 1);
  CHECK(txs[1].args[0] == Value(Fixed::from_int(31)));
}

TEST_CASE("oracle proposes thirty midnights and one month end") {
  std::size_t midnights = 0;
  std::size_t month_ends = 0;
  for (std::uint64_t step = 0; step <= SimulationClock::kEndStep; ++step) {
    for (const Transaction& tx : oracle_tick(step)) {
      (tx.method == "midnightProcess" ? midnights : month_ends) += 1;
    }
  }
  CHECK(midnights == 30);
  CHECK(month_ends == 1);
}

TEST_CASE("stakeholder proposes one sample when its datetime arrives") {
  StakeholderAgent agent(1, {wrow(2, 5, "20.000", "1000.000", "50.000")});
  CHECK(agent.tick(28).empty());
  const auto txs = agent.tick(29);
  REQUIRE(txs.size() == 1);
  const Transaction& tx = txs[0];
  CHECK(tx.proposer == tepc::source_address(1));
  CHECK(tx.target == tepc::contract_address(tepc::kDataQualifier));
  CHECK(tx.method == "addHourlySample");
  REQUIRE(tx.args.size() == 3);
  CHECK(tx.args[0] == Value(Fixed::from_int(2)));
  CHECK(tx.args[1] == Value(Fixed::from_int(5)));
  CHECK(tx.args[2] == Value(SampleTriple{Fixed::parse("20.000"),
                                         Fixed::parse("1000.000"),
                                         Fixed::parse("50.000")}));
  CHECK(tx.proposed_at_step == 29);
  CHECK(agent.tick(29).empty());
  CHECK(agent.tick(30).empty());
}

TEST_CASE("null channels pass through to the sample argument") {
  StakeholderAgent agent(2, {WeatherRow{2, 5, {}, {}, {}}});
  const auto txs = agent.tick(29);
  REQUIRE(txs.size() == 1);
  CHECK(txs[0].args[2] == Value(SampleTriple{}));
}

TEST_CASE("duplicated rows yield one transaction each in row order") {
  StakeholderAgent agent(0, {wrow(2, 5, "20.000", "1000.000", "50.000"),
                             wrow(2, 5, "0.000", "0.000", "0.000")});
  const auto txs = agent.tick(29);
  REQUIRE(txs.size() == 2);
  CHECK(txs[0].args[2] == Value(SampleTriple{Fixed::parse("20.000"),
                                             Fixed::parse("1000.000"),
                                             Fixed::parse("50.000")}));
  CHECK(txs[1].args[2] == Value(SampleTriple{Fixed(), Fixed(), Fixed()}));
}

TEST_CASE("stakeholder holds samples until the month begins") {
  StakeholderAgent agent(0, {wrow(2, 0, "20.000", "1000.000", "50.000")});
  for (std::uint64_t step = 0; step < SimulationClock::kMonthBeginStep; ++step) {
    CHECK(agent.tick(step).empty());
  }
  CHECK(agent.tick(SimulationClock::kMonthBeginStep).size() == 1);
}

TEST_CASE("overdue rows are proposed at the first eligible tick") {
  StakeholderAgent agent(2, {wrow(1, 5, "20.000", "1000.000", "50.000"),
                             wrow(2, 0, "21.000", "1000.000", "50.000")});
  CHECK(agent.tick(23).empty());
  const auto txs = agent.tick(24);
  REQUIRE(txs.size() == 2);
  CHECK(txs[0].args[0] == Value(Fixed::from_int(1)));
  CHECK(txs[0].proposed_at_step == 24);
  CHECK(txs[1].args[0] == Value(Fixed::from_int(2)));
}

TEST_CASE("meter proposes the day's consumption at its datetime") {
  MeterAgent agent({ConsumptionRow{2, 23, Fixed::parse("128.003")},
                    ConsumptionRow{3, 23, std::nullopt}});
  CHECK(agent.tick(46).empty());
  const auto txs = agent.tick(SimulationClock::step_of(2, 23));
  REQUIRE(txs.size() == 1);
  CHECK(txs[0].proposer == tepc::source_address(3));
  CHECK(txs[0].target == tepc::contract_address(tepc::kDataQualifier));
  CHECK(txs[0].method == "addDailySample");
  REQUIRE(txs[0].args.size() == 2);
  CHECK(txs[0].args[0] == Value(Fixed::from_int(2)));
  CHECK(txs[0].args[1] == Value(Fixed::parse("128.003")));

  const auto null_txs = agent.tick(SimulationClock::step_of(3, 23));
  REQUIRE(null_txs.size() == 1);
  CHECK(null_txs[0].args[0] == Value(Fixed::from_int(3)));
  CHECK(null_txs[0].args[1] == Value());
}

TEST_CASE("a delayed consumption row lands in its arrival day slot") {
  // A (2, 23) reading delayed by two hours arrives at (3, 01) and must be
  // booked as day 3, leaving day 2 without a consumption sample.
  MeterAgent agent({ConsumptionRow{3, 1, Fixed::from_int(100)}});
  CHECK(agent.tick(SimulationClock::step_of(2, 23)).empty());
  const auto txs = agent.tick(SimulationClock::step_of(3, 1));
  REQUIRE(txs.size() == 1);
  CHECK(txs[0].args[0] == Value(Fixed::from_int(3)));
}

TEST_CASE("a month with consumption equal to the prediction saves zero") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "epochsim_zero_saving";
  fs::create_directories(dir);
  const auto truth = generate_weather(7, WeatherVariant::kTruth);
  const auto cons = generate_consumption(7, truth, tepc::PredictorModel{},
                                         SavingProfile{0, 0, 0});
  const std::string weather_path = (dir / "weather.csv").string();
  const std::string cons_path = (dir / "consumption.csv").string();
  write_weather_csv(weather_path, truth);
  write_consumption_csv(cons_path, cons);

  ScenarioConfig config;
  config.dataset_seed = 7;
  config.paths = {weather_path, weather_path, weather_path, cons_path};
  const RunResult result = run_simulation(config);

  CHECK(result.report.monthly_saving == Fixed());
  CHECK(result.report.validated);
  REQUIRE(result.report.daily_savings.size() == 30);
  for (const Fixed& s : result.report.daily_savings) CHECK(s == Fixed());
  CHECK(result.report.receipt_counts.at("applied") == result.txs.size());
  CHECK(result.txs.size() == 3 * 720 + 30 + 31);

  const StateEntry* monthly = result.ledger.state.find(
      {tepc::kAggregator, tepc::sigma_monthly_key(0)});
  REQUIRE(monthly != nullptr);
  CHECK(monthly->value == Value(Fixed()));
}

TEST_CASE("a clean month commits identically under both architectures") {
  ScenarioConfig config;
  config.dataset_seed = 1;
  config.rng_seed = 1;

  config.architecture.kind = Architecture::kOrderExecute;
  const RunResult oe = run_simulation(config);
  config.architecture.kind = Architecture::kExecuteOrderValidate;
  const RunResult eov = run_simulation(config);

  CHECK(oe.report.monthly_saving.str() == "348.674");
  CHECK(eov.report.monthly_saving.str() == "348.674");
  CHECK(oe.report.validated);
  CHECK(serialize_state(oe.ledger.state) == serialize_state(eov.ledger.state));
  CHECK(oe.report.block_count == 721);
  CHECK(eov.report.block_count == 721);
  CHECK(oe.report.invalidated_blocks.empty());
  CHECK(eov.report.invalidated_blocks.empty());
  CHECK(oe.report.receipt_counts.at("applied") == 2221);
  CHECK(eov.report.receipt_counts.at("applied") == 2221);

  const std::vector<std::string> statuses = {
      "applied", "failed_exception", "invalidated_block_fault",
      "invalidated_mvcc_conflict", "rejected_at_endorsement"};
  for (const std::string& name : statuses) {
    CHECK(oe.report.receipt_counts.count(name) == 1);
  }
  CHECK(oe.report.receipt_counts.size() == statuses.size());
}

TEST_CASE("the clean scenario reports no baseline deviation") {
  ScenarioConfig config;
  config.dataset_seed = 2;
  const RunResult result = run_scenario(config);
  CHECK(!result.report.baseline_deviation.has_value());
}

TEST_CASE("faulted scenarios report the deviation from the clean baseline") {
  ScenarioConfig config;
  config.scenario = Scenario::kS2a;
  config.dataset_seed = 1;
  config.rng_seed = 1;
  config.architecture.kind = Architecture::kOrderExecute;
  const RunResult faulted = run_scenario(config);

  ScenarioConfig base = config;
  base.scenario = Scenario::kS1;
  const RunResult clean = run_simulation(base);

  REQUIRE(faulted.report.baseline_deviation.has_value());
  CHECK(*faulted.report.baseline_deviation ==
        faulted.report.monthly_saving - clean.report.monthly_saving);
  CHECK(faulted.report.baseline_deviation->str() == "-1.370");
  CHECK(faulted.report.invalidated_blocks == std::vector<std::uint64_t>{2});
  CHECK(faulted.report.receipt_counts.at("invalidated_block_fault") == 3);
}

TEST_CASE("run reports serialize deterministically") {
  ScenarioConfig config;
  config.scenario = Scenario::kS2a;
  config.dataset_seed = 1;
  config.rng_seed = 1;
  config.architecture.kind = Architecture::kOrderExecute;
  const RunResult first = run_scenario(config);
  const RunResult second = run_scenario(config);
  const std::string text = report_to_json(first.report);
  CHECK(text == report_to_json(second.report));

  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j.at("config").at("scenario") == "s2a");
  CHECK(j.at("config").at("architecture") == "oe");
  CHECK(j.at("config").at("dataset_seed") == 1);
  CHECK(j.at("monthly_saving") == first.report.monthly_saving.str());
  CHECK(j.at("validated") == true);
  CHECK(j.at("daily_savings").size() == 30);
  CHECK(j.at("receipts").at("invalidated_block_fault") == 3);
  CHECK(j.at("blocks").at("count") == 721);
  CHECK(j.at("blocks").at("invalidated") == nlohmann::json::array({2}));
  CHECK(j.at("baseline_deviation") == "-1.370");
}

TEST_CASE("the clean report serializes a null baseline deviation") {
  ScenarioConfig config;
  config.dataset_seed = 1;
  const RunResult result = run_scenario(config);
  const nlohmann::json j = nlohmann::json::parse(report_to_json(result.report));
  CHECK(j.at("baseline_deviation").is_null());
}
