// SPDX-License-Identifier: Apache-2.0
#include "epochsim/simulation.hpp"

#include <utility>

#include <nlohmann/json.hpp>

#include "epochsim/contracts.hpp"

namespace epochsim {

using ordered_json = nlohmann::ordered_json;

namespace {

Transaction sample_tx(int source_index, const WeatherRow& row,
                      std::uint64_t step) {
  Transaction tx;
  tx.proposer = tepc::source_address(source_index);
  tx.target = tepc::contract_address(tepc::kDataQualifier);
  tx.method = "addHourlySample";
  tx.args = {Value(Fixed::from_int(row.day)), Value(Fixed::from_int(row.hour)),
             Value(SampleTriple{row.temperature, row.pressure, row.humidity})};
  tx.proposed_at_step = step;
  return tx;
}

Transaction consumption_tx(const ConsumptionRow& row, std::uint64_t step) {
  Transaction tx;
  tx.proposer = tepc::source_address(3);
  tx.target = tepc::contract_address(tepc::kDataQualifier);
  tx.method = "addDailySample";
  tx.args = {Value(Fixed::from_int(row.day)),
             row.consumption_kwh ? Value(*row.consumption_kwh) : Value()};
  tx.proposed_at_step = step;
  return tx;
}

Transaction oracle_tx(const char* method, ValueList args, std::uint64_t step) {
  Transaction tx;
  tx.proposer = tepc::oracle_address();
  tx.target = tepc::contract_address(tepc::kDataQualifier);
  tx.method = method;
  tx.args = std::move(args);
  tx.proposed_at_step = step;
  return tx;
}

struct LoadedDatasets {
  std::array<std::vector<WeatherRow>, 3> weather;
  std::vector<ConsumptionRow> consumption;
};

LoadedDatasets load_datasets(const ScenarioConfig& config) {
  const std::array<const std::string*, 4> paths = {
      &config.paths.u0, &config.paths.u1, &config.paths.u2, &config.paths.u3};
  const std::array<WeatherVariant, 3> variants = {WeatherVariant::kSource0,
                                                  WeatherVariant::kSource1,
                                                  WeatherVariant::kSource2};
  LoadedDatasets data;
  for (int i = 0; i < 3; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    data.weather[u] = paths[u]->empty()
                          ? generate_weather(config.dataset_seed, variants[u])
                          : read_weather_csv(*paths[u]);
  }
  data.consumption =
      paths[3]->empty()
          ? generate_consumption(config.dataset_seed,
                                 generate_weather(config.dataset_seed,
                                                  WeatherVariant::kTruth),
                                 config.model)
          : read_consumption_csv(*paths[3]);

  // Scenario faults touch generated data only; explicit files are taken
  // verbatim (pre-injected by the caller).
  for (const FaultSpec& fault : scenario_faults(config.scenario, config.rng_seed)) {
    if (fault.source == "u3") {
      if (paths[3]->empty()) inject(data.consumption, fault);
      continue;
    }
    for (int i = 0; i < 3; ++i) {
      const std::size_t u = static_cast<std::size_t>(i);
      if (fault.source == tepc::kSourceIds[u] && paths[u]->empty())
        inject(data.weather[u], fault);
    }
  }
  return data;
}

std::vector<Fixed> read_series(const WorldState& state, const char* count_key,
                               std::string (*entry_key)(std::int64_t)) {
  std::vector<Fixed> out;
  const StateEntry* count = state.find({tepc::kAggregator, count_key});
  if (!count || !count->value.is_number()) return out;
  const std::int64_t n = count->value.number().millis() / Fixed::kScale;
  for (std::int64_t i = 0; i < n; ++i) {
    const StateEntry* entry = state.find({tepc::kAggregator, entry_key(i)});
    if (!entry || !entry->value.is_number()) break;
    out.push_back(entry->value.number());
  }
  return out;
}

SimReport build_report(const ScenarioConfig& config, const RunResult& run) {
  SimReport report;
  report.config = config;
  report.daily_savings =
      read_series(run.ledger.state, tepc::kSigmaDailyCount, tepc::sigma_daily_key);
  std::vector<Fixed> monthly = read_series(
      run.ledger.state, tepc::kSigmaMonthlyCount, tepc::sigma_monthly_key);
  if (!monthly.empty()) {
    report.monthly_saving = monthly.back();
    report.validated = !report.monthly_saving.is_negative();
  }
  for (ReceiptStatus status :
       {ReceiptStatus::kApplied, ReceiptStatus::kFailedException,
        ReceiptStatus::kInvalidatedBlockFault,
        ReceiptStatus::kInvalidatedMvccConflict,
        ReceiptStatus::kRejectedAtEndorsement})
    report.receipt_counts[std::string(receipt_status_name(status))] = 0;
  for (const Receipt& receipt : run.receipts)
    ++report.receipt_counts[std::string(receipt_status_name(receipt.status))];
  report.block_count = run.ledger.chain.size();
  for (const Block& block : run.ledger.chain)
    if (block.status == BlockStatus::kInvalidated)
      report.invalidated_blocks.push_back(block.height);
  return report;
}

}  // namespace

std::vector<Transaction> StakeholderAgent::tick(std::uint64_t step) {
  std::vector<Transaction> out;
  if (step < SimulationClock::kMonthBeginStep) return out;
  while (cursor_ < rows_.size()) {
    const WeatherRow& row = rows_[cursor_];
    if (SimulationClock::step_of(row.day, row.hour) > step) break;
    out.push_back(sample_tx(source_index_, row, step));
    ++cursor_;
  }
  return out;
}

std::vector<Transaction> MeterAgent::tick(std::uint64_t step) {
  std::vector<Transaction> out;
  if (step < SimulationClock::kMonthBeginStep) return out;
  while (cursor_ < rows_.size()) {
    const ConsumptionRow& row = rows_[cursor_];
    if (SimulationClock::step_of(row.day, row.hour) > step) break;
    out.push_back(consumption_tx(row, step));
    ++cursor_;
  }
  return out;
}

std::vector<Transaction> oracle_tick(std::uint64_t step) {
  std::vector<Transaction> out;
  if (step == SimulationClock::kEndStep)
    out.push_back(oracle_tx("monthEndProcess", {}, step));
  if (step % SimulationClock::kHoursPerDay == 0 &&
      step >= SimulationClock::kFirstMidnightStep &&
      step <= SimulationClock::kEndStep) {
    const int finished_day = static_cast<int>(step / SimulationClock::kHoursPerDay);
    out.push_back(oracle_tx("midnightProcess",
                            {Value(Fixed::from_int(finished_day))}, step));
  }
  return out;
}

RunResult run_simulation(const ScenarioConfig& config) {
  LoadedDatasets data = load_datasets(config);

  RunResult result;
  ContractRegistry registry;
  Mempool mempool;
  std::array<StakeholderAgent, 3> stakeholders = {
      StakeholderAgent(0, std::move(data.weather[0])),
      StakeholderAgent(1, std::move(data.weather[1])),
      StakeholderAgent(2, std::move(data.weather[2]))};
  MeterAgent meter(std::move(data.consumption));

  const int frequency = config.architecture.block_frequency_steps;
  for (std::uint64_t step = 0; step <= SimulationClock::kEndStep; ++step) {
    if (step == SimulationClock::kDeployStep)
      tepc::deploy_tepc(registry, result.ledger.state,
                        {config.tolerances, config.weights, config.model},
                        step);
    for (Transaction& tx : oracle_tick(step))
      result.txs.push_back(mempool.admit(std::move(tx)));
    if (step >= SimulationClock::kSourceInitStep) {
      for (StakeholderAgent& agent : stakeholders)
        for (Transaction& tx : agent.tick(step))
          result.txs.push_back(mempool.admit(std::move(tx)));
      for (Transaction& tx : meter.tick(step))
        result.txs.push_back(mempool.admit(std::move(tx)));
    }
    if (step % static_cast<std::uint64_t>(frequency) == 0 ||
        step == SimulationClock::kEndStep) {
      std::vector<Receipt> receipts =
          arch_step(result.ledger, mempool, registry, config.architecture, step);
      result.receipts.insert(result.receipts.end(),
                             std::make_move_iterator(receipts.begin()),
                             std::make_move_iterator(receipts.end()));
    }
  }

  result.report = build_report(config, result);
  return result;
}

RunResult run_scenario(const ScenarioConfig& config) {
  RunResult result = run_simulation(config);
  if (config.scenario != Scenario::kS1) {
    ScenarioConfig baseline = config;
    baseline.scenario = Scenario::kS1;
    result.report.baseline_deviation =
        result.report.monthly_saving -
        run_simulation(baseline).report.monthly_saving;
  }
  return result;
}

std::string report_to_json(const SimReport& report) {
  ordered_json j;
  j["config"] = ordered_json::parse(config_to_json(report.config));
  j["monthly_saving"] = report.monthly_saving.str();
  j["validated"] = report.validated;
  ordered_json daily = ordered_json::array();
  for (const Fixed& v : report.daily_savings) daily.push_back(v.str());
  j["daily_savings"] = std::move(daily);
  ordered_json receipts;
  for (const auto& [name, count] : report.receipt_counts) receipts[name] = count;
  j["receipts"] = std::move(receipts);
  j["blocks"] = {{"count", report.block_count},
                 {"invalidated", report.invalidated_blocks}};
  if (report.baseline_deviation)
    j["baseline_deviation"] = report.baseline_deviation->str();
  else
    j["baseline_deviation"] = nullptr;
  return j.dump(2);
}

}  // namespace epochsim
