// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epochsim/scenario.hpp"

namespace epochsim {

// Simulation calendar: one step per hour across a 31-day month. Day 1 is
// reserved for setup; data flows from day 2.
struct SimulationClock {
  static constexpr std::uint64_t kHoursPerDay = 24;
  static constexpr std::uint64_t kDaysPerMonth = 31;
  static constexpr std::uint64_t kDeployStep = 12;
  static constexpr std::uint64_t kSourceInitStep = 16;
  static constexpr std::uint64_t kMonthBeginStep = 24;
  static constexpr std::uint64_t kFirstMidnightStep = 48;
  static constexpr std::uint64_t kEndStep = kHoursPerDay * kDaysPerMonth;

  static constexpr int hour_of_day(std::uint64_t step) {
    return static_cast<int>(step % kHoursPerDay);
  }
  static constexpr int day_of_month(std::uint64_t step) {
    return static_cast<int>(step / kHoursPerDay) + 1;
  }
  static constexpr std::uint64_t step_of(int day, int hour) {
    return static_cast<std::uint64_t>(day - 1) * kHoursPerDay +
           static_cast<std::uint64_t>(hour);
  }
};

// Weather stakeholder: one addHourlySample per dataset row, proposed when
// the clock reaches the row's datetime. Duplicated rows yield one
// transaction each, in row order.
class StakeholderAgent {
 public:
  StakeholderAgent(int source_index, std::vector<WeatherRow> rows)
      : source_index_(source_index), rows_(std::move(rows)) {}

  std::vector<Transaction> tick(std::uint64_t step);

 private:
  int source_index_;
  std::vector<WeatherRow> rows_;
  std::size_t cursor_ = 0;
};

// Consumption meter: one addDailySample per row. The day argument is the
// row's datetime day, so a delayed sample lands in the slot of the day it
// arrives on, never the day it was measured for.
class MeterAgent {
 public:
  explicit MeterAgent(std::vector<ConsumptionRow> rows)
      : rows_(std::move(rows)) {}

  std::vector<Transaction> tick(std::uint64_t step);

 private:
  std::vector<ConsumptionRow> rows_;
  std::size_t cursor_ = 0;
};

// Time oracle: midnightProcess for the finished day at every 00:00 from the
// first midnight on, plus monthEndProcess at the end of the month. At the
// final step the month-end proposal precedes the midnight one, so the month
// total is sealed over the days already aggregated; the last day's saving is
// recorded right after it.
std::vector<Transaction> oracle_tick(std::uint64_t step);

struct SimReport {
  ScenarioConfig config;
  Fixed monthly_saving;
  bool validated = false;
  std::vector<Fixed> daily_savings;
  std::map<std::string, std::size_t> receipt_counts;  // keyed by status name
  std::size_t block_count = 0;
  std::vector<std::uint64_t> invalidated_blocks;  // block heights
  std::optional<Fixed> baseline_deviation;        // unset for the baseline
};

struct RunResult {
  Ledger ledger;
  std::vector<Transaction> txs;      // every proposal, in admission order
  std::vector<Receipt> receipts;     // in commit order
  SimReport report;
};

// One full month under the configured architecture. Datasets come from the
// config's explicit paths or, where unset, the seeded generator with the
// scenario's fault preset applied.
RunResult run_simulation(const ScenarioConfig& config);

// run_simulation plus, for faulted scenarios, the deviation of the monthly
// saving from the same-dataset baseline run.
RunResult run_scenario(const ScenarioConfig& config);

std::string report_to_json(const SimReport& report);

}  // namespace epochsim
