// SPDX-License-Identifier: Apache-2.0
#include "epochsim/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

namespace epochsim {

namespace {

// Diurnal temperature profile: -cos(2*pi*(h-4)/24) scaled by 1000, so the
// daily minimum falls at 04:00, the maximum at 16:00, and the 24 entries sum
// to zero exactly (the daily mean is the monthly mean plus drift).
constexpr std::array<std::int64_t, 24> kDiurnal = {
    -500, -707, -866, -966, -1000, -966, -866, -707, -500, -259, 0,    259,
    500,  707,  866,  966,  1000,  966,  866,  707,  500,  259,  0,    -259};

constexpr std::string_view kWeatherHeader = "day,hour,temperature,pressure,humidity";
constexpr std::string_view kConsumptionHeader = "day,hour,consumption_kwh";

std::int64_t unit_range(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Partial Fisher-Yates: the first `count` slots of a shuffled index list.
std::vector<std::size_t> pick_distinct(std::mt19937_64& rng, std::size_t n,
                                       std::size_t count) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

int parse_int_field(std::string_view piece, std::size_t line_no,
                    const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
  if (ec != std::errc{} || ptr != piece.data() + piece.size())
    throw DatasetError{"malformed " + std::string(what) + " at line " +
                       std::to_string(line_no)};
  return value;
}

std::optional<Fixed> parse_value_field(std::string_view piece,
                                       std::size_t line_no, const char* what) {
  if (piece.empty()) return std::nullopt;
  try {
    return Fixed::parse(std::string(piece));
  } catch (const std::invalid_argument&) {
    throw DatasetError{"non-numeric " + std::string(what) + " at line " +
                       std::to_string(line_no)};
  }
}

void parse_datetime(std::string_view day_piece, std::string_view hour_piece,
                    std::size_t line_no, int& day, int& hour) {
  day = parse_int_field(day_piece, line_no, "day");
  hour = parse_int_field(hour_piece, line_no, "hour");
  if (day < 1 || day > 31 || hour < 0 || hour > 23)
    throw DatasetError{"datetime out of range at line " + std::to_string(line_no)};
}

void check_sorted(int prev_day, int prev_hour, int day, int hour,
                  std::size_t line_no) {
  if (std::pair(day, hour) < std::pair(prev_day, prev_hour))
    throw DatasetError{"rows not sorted by datetime at line " +
                       std::to_string(line_no)};
}

std::vector<std::string_view> csv_lines(const std::string& text,
                                        std::string_view expected_header) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (auto& line : lines)
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (lines.empty() || lines.front() != expected_header)
    throw DatasetError{"missing header \"" + std::string(expected_header) + "\""};
  return lines;
}

void append_field(std::string& out, const std::optional<Fixed>& value) {
  out.push_back(',');
  if (value) out += value->str();
}

void append_datetime(std::string& out, int day, int hour) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%d,%02d", day, hour);
  out += buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError{"cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError{"cannot write " + path};
  out << text;
  if (!out) throw DatasetError{"cannot write " + path};
}

}  // namespace

std::vector<WeatherRow> generate_weather(std::uint64_t seed,
                                         WeatherVariant variant) {
  std::mt19937_64 rng(seed);
  const std::int64_t mean_temp = unit_range(rng, 2000, 10000);
  const std::int64_t amplitude = unit_range(rng, 3000, 5000);
  std::array<std::int64_t, 32> temp_drift{};
  std::array<std::int64_t, 32> pressure_base{};
  std::array<std::int64_t, 32> humidity_base{};
  for (int day = 2; day <= 31; ++day) {
    temp_drift[day] = unit_range(rng, -2000, 2000);
    pressure_base[day] = unit_range(rng, 990000, 1010000);
    humidity_base[day] = unit_range(rng, 40000, 70000);
  }

  // Noise keeps every pairwise channel difference within half the voting
  // tolerance. Temperature noise is biased per source (the first two low, the
  // third high) so that dropping one source always moves the qualified value.
  const bool noisy = variant != WeatherVariant::kTruth;
  const int source_index = noisy ? static_cast<int>(variant) - 1 : 0;
  std::mt19937_64 noise_rng(seed * 0x9e3779b97f4a7c15ULL +
                            static_cast<std::uint64_t>(source_index + 1));

  std::vector<WeatherRow> rows;
  rows.reserve(30 * 24);
  for (int day = 2; day <= 31; ++day) {
    for (int hour = 0; hour < 24; ++hour) {
      std::int64_t tau = mean_temp + temp_drift[day] + amplitude * kDiurnal[hour] / 1000;
      std::int64_t psi = pressure_base[day] + 2 * kDiurnal[hour];
      std::int64_t rho = humidity_base[day] - 5 * kDiurnal[hour];
      if (noisy) {
        std::int64_t magnitude = unit_range(noise_rng, 100, 250);
        tau += source_index == 2 ? magnitude : -magnitude;
        psi += unit_range(noise_rng, -1250, 1250);
        rho += unit_range(noise_rng, -1250, 1250);
      }
      rows.push_back({day, hour, Fixed::from_millis(tau),
                      Fixed::from_millis(psi), Fixed::from_millis(rho)});
    }
  }
  return rows;
}

std::vector<ConsumptionRow> generate_consumption(
    std::uint64_t seed, const std::vector<WeatherRow>& weather_truth,
    const tepc::PredictorModel& model, const SavingProfile& profile) {
  std::map<int, std::vector<Fixed>> taus_by_day;
  for (const WeatherRow& row : weather_truth) {
    if (!row.temperature)
      throw DatasetError{"weather truth has a null temperature"};
    taus_by_day[row.day].push_back(*row.temperature);
  }
  for (int day = 2; day <= 31; ++day)
    if (taus_by_day[day].size() != 24)
      throw DatasetError{"weather truth must cover days 2-31 hourly"};

  std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4fULL);
  std::vector<ConsumptionRow> rows;
  rows.reserve(30);
  for (int day = 2; day <= 31; ++day) {
    Fixed sum;
    for (const Fixed& tau : taus_by_day[day]) sum = sum + tau;
    Fixed mean = sum / Fixed::from_int(24);
    Fixed hdd = model.base_temperature - mean;
    if (hdd < Fixed()) hdd = Fixed();
    Fixed predicted = model.base_load + model.hdd_coefficient * hdd;

    std::int64_t saving = profile.saving_min_millis;
    if (profile.saving_max_millis > profile.saving_min_millis)
      saving = unit_range(rng, profile.saving_min_millis, profile.saving_max_millis);
    std::int64_t noise = 0;
    if (profile.noise_millis > 0)
      noise = unit_range(rng, -profile.noise_millis, profile.noise_millis);

    Fixed consumption =
        predicted - Fixed::from_millis(saving) + Fixed::from_millis(noise);
    rows.push_back({day, 23, consumption});
  }
  return rows;
}

FaultSpec FaultSpec::parse(const std::string& text) {
  std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw DatasetError{"fault spec needs \"kind:key=value,...\": " + text};
  std::string_view kind_name(text.data(), colon);

  FaultSpec spec;
  if (kind_name == "single_null")
    spec.kind = InjectionKind::kSingleNull;
  else if (kind_name == "multi_null")
    spec.kind = InjectionKind::kMultiNull;
  else if (kind_name == "duplicate_zero")
    spec.kind = InjectionKind::kDuplicateZero;
  else if (kind_name == "delay")
    spec.kind = InjectionKind::kDelay;
  else
    throw DatasetError{"unknown fault kind \"" + std::string(kind_name) + "\""};

  for (std::string_view pair : split(std::string_view(text).substr(colon + 1), ',')) {
    std::size_t eq = pair.find('=');
    if (eq == std::string_view::npos)
      throw DatasetError{"malformed fault field \"" + std::string(pair) + "\""};
    std::string_view key = pair.substr(0, eq);
    std::string_view value = pair.substr(eq + 1);
    auto as_int = [&](const char* what) {
      return parse_int_field(value, 0, what);
    };
    if (key == "source") {
      spec.source = std::string(value);
    } else if (key == "day") {
      spec.day = as_int("day");
    } else if (key == "hour") {
      spec.hour = as_int("hour");
    } else if (key == "count") {
      spec.count = as_int("count");
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(as_int("seed"));
    } else if (key == "hours") {
      spec.delay_hours = as_int("hours");
    } else if (key == "days") {
      for (std::string_view piece : split(value, '|'))
        spec.days.push_back(parse_int_field(piece, 0, "days"));
    } else {
      throw DatasetError{"unknown fault field \"" + std::string(key) + "\""};
    }
  }

  switch (spec.kind) {
    case InjectionKind::kSingleNull:
      if (spec.day < 1 || spec.day > 31 || spec.hour < 0 || spec.hour > 23)
        throw DatasetError{"single_null needs day in 1-31 and hour in 0-23"};
      break;
    case InjectionKind::kMultiNull:
    case InjectionKind::kDuplicateZero:
      if (spec.count < 25 || spec.count > 30)
        throw DatasetError{"fault count must lie in [25, 30]"};
      break;
    case InjectionKind::kDelay:
      if (spec.days.empty() || spec.delay_hours < 1)
        throw DatasetError{"delay needs days=a|b|... and hours >= 1"};
      break;
  }
  if (spec.source.empty())
    throw DatasetError{"fault spec needs source=u0..u3"};
  return spec;
}

std::string FaultSpec::tag() const {
  switch (kind) {
    case InjectionKind::kSingleNull: return "single_null";
    case InjectionKind::kMultiNull: return "multi_null";
    case InjectionKind::kDuplicateZero: return "duplicate_zero";
    case InjectionKind::kDelay: return "delay";
  }
  return "unknown";
}

std::string FaultSpec::str() const {
  std::ostringstream out;
  out << tag() << ":source=" << source;
  switch (kind) {
    case InjectionKind::kSingleNull:
      out << ",day=" << day << ",hour=" << hour;
      break;
    case InjectionKind::kMultiNull:
    case InjectionKind::kDuplicateZero:
      out << ",count=" << count << ",seed=" << seed;
      break;
    case InjectionKind::kDelay:
      out << ",days=";
      for (std::size_t i = 0; i < days.size(); ++i)
        out << (i ? "|" : "") << days[i];
      out << ",hours=" << delay_hours;
      break;
  }
  return out.str();
}

void inject(std::vector<WeatherRow>& rows, const FaultSpec& spec) {
  switch (spec.kind) {
    case InjectionKind::kSingleNull: {
      auto it = std::find_if(rows.begin(), rows.end(), [&](const WeatherRow& r) {
        return r.day == spec.day && r.hour == spec.hour;
      });
      if (it == rows.end())
        throw DatasetError{"no row at day " + std::to_string(spec.day) +
                           " hour " + std::to_string(spec.hour)};
      it->temperature = it->pressure = it->humidity = std::nullopt;
      return;
    }
    case InjectionKind::kMultiNull: {
      if (static_cast<std::size_t>(spec.count) > rows.size())
        throw DatasetError{"fault count exceeds dataset size"};
      std::mt19937_64 rng(spec.seed);
      for (std::size_t i : pick_distinct(rng, rows.size(), spec.count)) {
        rows[i].temperature = rows[i].pressure = rows[i].humidity = std::nullopt;
      }
      return;
    }
    case InjectionKind::kDuplicateZero: {
      if (static_cast<std::size_t>(spec.count) > rows.size())
        throw DatasetError{"fault count exceeds dataset size"};
      std::mt19937_64 rng(spec.seed);
      std::vector<std::size_t> picked =
          pick_distinct(rng, rows.size(), spec.count);
      std::sort(picked.rbegin(), picked.rend());
      for (std::size_t i : picked) {
        WeatherRow zero{rows[i].day, rows[i].hour, Fixed(), Fixed(), Fixed()};
        rows.insert(rows.begin() + static_cast<std::ptrdiff_t>(i) + 1, zero);
      }
      return;
    }
    case InjectionKind::kDelay:
      throw DatasetError{"delay targets a consumption dataset"};
  }
}

void inject(std::vector<ConsumptionRow>& rows, const FaultSpec& spec) {
  if (spec.kind != InjectionKind::kDelay)
    throw DatasetError{"only delay applies to a consumption dataset"};
  std::vector<std::size_t> targets;
  for (int day : spec.days) {
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const ConsumptionRow& r) { return r.day == day; });
    if (it == rows.end())
      throw DatasetError{"no consumption row for day " + std::to_string(day)};
    targets.push_back(static_cast<std::size_t>(it - rows.begin()));
  }
  for (std::size_t i : targets) {
    int hour = rows[i].hour + spec.delay_hours;
    rows[i].day += hour / 24;
    rows[i].hour = hour % 24;
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ConsumptionRow& a, const ConsumptionRow& b) {
                     return std::pair(a.day, a.hour) < std::pair(b.day, b.hour);
                   });
}

std::string weather_to_csv(const std::vector<WeatherRow>& rows) {
  std::string out(kWeatherHeader);
  out.push_back('\n');
  for (const WeatherRow& row : rows) {
    append_datetime(out, row.day, row.hour);
    append_field(out, row.temperature);
    append_field(out, row.pressure);
    append_field(out, row.humidity);
    out.push_back('\n');
  }
  return out;
}

std::string consumption_to_csv(const std::vector<ConsumptionRow>& rows) {
  std::string out(kConsumptionHeader);
  out.push_back('\n');
  for (const ConsumptionRow& row : rows) {
    append_datetime(out, row.day, row.hour);
    append_field(out, row.consumption_kwh);
    out.push_back('\n');
  }
  return out;
}

std::vector<WeatherRow> weather_from_csv(const std::string& text) {
  std::vector<std::string_view> lines = csv_lines(text, kWeatherHeader);
  std::vector<WeatherRow> rows;
  int prev_day = 0, prev_hour = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::size_t line_no = i + 1;
    std::vector<std::string_view> fields = split(lines[i], ',');
    if (fields.size() != 5)
      throw DatasetError{"expected 5 fields at line " + std::to_string(line_no)};
    WeatherRow row;
    parse_datetime(fields[0], fields[1], line_no, row.day, row.hour);
    check_sorted(prev_day, prev_hour, row.day, row.hour, line_no);
    prev_day = row.day;
    prev_hour = row.hour;
    row.temperature = parse_value_field(fields[2], line_no, "temperature");
    row.pressure = parse_value_field(fields[3], line_no, "pressure");
    row.humidity = parse_value_field(fields[4], line_no, "humidity");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ConsumptionRow> consumption_from_csv(const std::string& text) {
  std::vector<std::string_view> lines = csv_lines(text, kConsumptionHeader);
  std::vector<ConsumptionRow> rows;
  int prev_day = 0, prev_hour = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::size_t line_no = i + 1;
    std::vector<std::string_view> fields = split(lines[i], ',');
    if (fields.size() != 3)
      throw DatasetError{"expected 3 fields at line " + std::to_string(line_no)};
    ConsumptionRow row;
    parse_datetime(fields[0], fields[1], line_no, row.day, row.hour);
    check_sorted(prev_day, prev_hour, row.day, row.hour, line_no);
    prev_day = row.day;
    prev_hour = row.hour;
    row.consumption_kwh = parse_value_field(fields[2], line_no, "consumption_kwh");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<WeatherRow> read_weather_csv(const std::string& path) {
  return weather_from_csv(read_file(path));
}

std::vector<ConsumptionRow> read_consumption_csv(const std::string& path) {
  return consumption_from_csv(read_file(path));
}

void write_weather_csv(const std::string& path,
                       const std::vector<WeatherRow>& rows) {
  write_file(path, weather_to_csv(rows));
}

void write_consumption_csv(const std::string& path,
                           const std::vector<ConsumptionRow>& rows) {
  write_file(path, consumption_to_csv(rows));
}

std::string dataset_filename(const std::string& source, std::uint64_t seed,
                             const std::string& fault_tag) {
  std::string name = source + "_seed" + std::to_string(seed);
  if (!fault_tag.empty()) name += "_" + fault_tag;
  return name + ".csv";
}

}  // namespace epochsim
