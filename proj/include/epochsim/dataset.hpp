// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epochsim/contracts.hpp"
#include "epochsim/fixed.hpp"

namespace epochsim {

// Raised for malformed files, unwritable paths, and injection specs that
// target rows which do not exist. The CLI maps it to exit code 2.
struct DatasetError {
  std::string message;
};

struct WeatherRow {
  int day = 1;
  int hour = 0;
  std::optional<Fixed> temperature;
  std::optional<Fixed> pressure;
  std::optional<Fixed> humidity;

  bool operator==(const WeatherRow&) const = default;
};

struct ConsumptionRow {
  int day = 1;
  int hour = 23;
  std::optional<Fixed> consumption_kwh;

  bool operator==(const ConsumptionRow&) const = default;
};

// The truth series carries no measurement noise; the per-source variants add
// seeded channel noise small enough that clean sources always vote together.
enum class WeatherVariant { kTruth, kSource0, kSource1, kSource2 };

// 720 rows covering days 2-31, hours 0-23. Temperatures follow a diurnal
// sinusoid around a monthly mean; all channels stay strictly inside the
// validator bounds so clean data is never clamped.
std::vector<WeatherRow> generate_weather(std::uint64_t seed,
                                         WeatherVariant variant);

struct SavingProfile {
  std::int64_t saving_min_millis = 8000;
  std::int64_t saving_max_millis = 16000;
  std::int64_t noise_millis = 2000;
};

// 30 rows, one per day at hour 23. Consumption is the model prediction on the
// true temperatures minus a seeded positive saving, so a clean month always
// yields a positive monthly saving.
std::vector<ConsumptionRow> generate_consumption(
    std::uint64_t seed, const std::vector<WeatherRow>& weather_truth,
    const tepc::PredictorModel& model, const SavingProfile& profile = {});

enum class InjectionKind { kSingleNull, kMultiNull, kDuplicateZero, kDelay };

struct FaultSpec {
  InjectionKind kind = InjectionKind::kSingleNull;
  std::string source;        // dataset this spec targets (u0..u3)
  int day = 0;               // single_null
  int hour = 0;              // single_null
  int count = 0;             // multi_null / duplicate_zero, within [25, 30]
  std::uint64_t seed = 0;    // multi_null / duplicate_zero
  std::vector<int> days;     // delay
  int delay_hours = 0;       // delay

  // Text form used by the CLI, e.g. "single_null:source=u2,day=2,hour=2",
  // "multi_null:source=u2,count=27,seed=5",
  // "duplicate_zero:source=u0,count=27,seed=5",
  // "delay:source=u3,days=3|11|16|25|27|30,hours=2".
  static FaultSpec parse(const std::string& text);
  std::string str() const;

  // Short tag used in derived file names, e.g. "duplicate_zero".
  std::string tag() const;

  bool operator==(const FaultSpec&) const = default;
};

void inject(std::vector<WeatherRow>& rows, const FaultSpec& spec);
void inject(std::vector<ConsumptionRow>& rows, const FaultSpec& spec);

// CSV text forms. Headers are "day,hour,temperature,pressure,humidity" and
// "day,hour,consumption_kwh"; the day is plain, the hour is two digits,
// numbers carry exactly three decimals, and null is an empty field.
std::string weather_to_csv(const std::vector<WeatherRow>& rows);
std::string consumption_to_csv(const std::vector<ConsumptionRow>& rows);
std::vector<WeatherRow> weather_from_csv(const std::string& text);
std::vector<ConsumptionRow> consumption_from_csv(const std::string& text);

std::vector<WeatherRow> read_weather_csv(const std::string& path);
std::vector<ConsumptionRow> read_consumption_csv(const std::string& path);
void write_weather_csv(const std::string& path,
                       const std::vector<WeatherRow>& rows);
void write_consumption_csv(const std::string& path,
                           const std::vector<ConsumptionRow>& rows);

// Canonical file name: "<source>_seed<k>.csv" or "<source>_seed<k>_<tag>.csv".
std::string dataset_filename(const std::string& source, std::uint64_t seed,
                             const std::string& fault_tag = "");

}  // namespace epochsim
