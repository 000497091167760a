// SPDX-License-Identifier: Apache-2.0
#include "epochsim/contracts.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <vector>

namespace epochsim::tepc {

Address source_address(int index) {
  return Address{AddressKind::kSource, kSourceIds.at(index)};
}

Address oracle_address() { return Address{AddressKind::kOracle, kOracleId}; }

Address contract_address(const char* id) {
  return Address{AddressKind::kContract, id};
}

namespace {

std::string two_digits(int n) {
  std::string s = std::to_string(n);
  return s.size() < 2 ? "0" + s : s;
}

}  // namespace

std::string pi_key(int source_index, int day, int hour) {
  return std::string("pi/") + kSourceIds.at(source_index) + "/d" +
         two_digits(day) + "/h" + two_digits(hour);
}

std::string cons_key(int day) { return "pi/u3/d" + two_digits(day); }

std::string gamma_key(int hour) { return "gamma/h" + two_digits(hour); }

std::string gamma_rel_key(int hour) {
  return "gamma/h" + two_digits(hour) + "/rel";
}

std::string sigma_daily_key(std::int64_t index) {
  return "sigma_d/" + std::to_string(index);
}

std::string sigma_monthly_key(std::int64_t index) {
  return "sigma_m/" + std::to_string(index);
}

std::string weight_key(int source_index) {
  return std::string("weights/") + kSourceIds.at(source_index);
}

namespace {

Fixed clamp_channel(const std::optional<Fixed>& value, const char* name,
                    Fixed lo, Fixed hi) {
  if (!value)
    throw ContractError{FaultKind::kNullValue,
                        std::string("comparison on null channel ") + name};
  return Fixed::min(Fixed::max(*value, lo), hi);
}

}  // namespace

SampleTriple clamp_sample(const SampleTriple& sample) {
  SampleTriple out;
  out.tau = clamp_channel(sample.tau, "tau", Fixed::from_int(-30),
                          Fixed::from_int(60));
  out.psi = clamp_channel(sample.psi, "psi", Fixed::from_int(850),
                          Fixed::from_int(1060));
  out.rho =
      clamp_channel(sample.rho, "rho", Fixed::from_int(0), Fixed::from_int(100));
  return out;
}

namespace {

bool channel_agrees(const std::optional<Fixed>& a, const std::optional<Fixed>& b,
                    Fixed tol) {
  if (!a || !b) return true;  // a channel only one side reports cannot disagree
  return (*a - *b).abs() <= tol;
}

bool samples_agree(const SampleTriple& a, const SampleTriple& b,
                   const VotingTolerances& tol) {
  return channel_agrees(a.tau, b.tau, tol.tau) &&
         channel_agrees(a.psi, b.psi, tol.psi) &&
         channel_agrees(a.rho, b.rho, tol.rho);
}

std::vector<int> mask_members(unsigned mask) {
  std::vector<int> members;
  for (int i = 0; i < 3; ++i)
    if (mask & (1u << i)) members.push_back(i);
  return members;
}

std::optional<Fixed> average_channel(
    const std::array<std::optional<SampleTriple>, 3>& inputs,
    const std::vector<int>& members,
    std::optional<Fixed> SampleTriple::*channel) {
  Fixed sum;
  int count = 0;
  for (int i : members) {
    const std::optional<Fixed>& v = (*inputs[i]).*channel;
    if (v) {
      sum += *v;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / Fixed::from_int(count);
}

}  // namespace

QualifiedSample qualify_by_voting(
    const std::array<std::optional<SampleTriple>, 3>& inputs,
    const std::array<Fixed, 3>& weights, const VotingTolerances& tol) {
  unsigned present = 0;
  for (int i = 0; i < 3; ++i)
    if (inputs[i]) present |= 1u << i;
  if (present == 0)
    throw std::invalid_argument("qualify_by_voting needs at least one sample");

  int lowest_present = 0;
  while (!(present & (1u << lowest_present))) ++lowest_present;

  std::vector<int> best;
  Fixed best_weight;
  for (unsigned mask = 1; mask < 8; ++mask) {
    if ((mask & present) != mask) continue;
    std::vector<int> members = mask_members(mask);
    bool consistent = true;
    for (std::size_t a = 0; a < members.size() && consistent; ++a)
      for (std::size_t b = a + 1; b < members.size() && consistent; ++b)
        consistent = samples_agree(*inputs[members[a]], *inputs[members[b]], tol);
    if (!consistent) continue;
    Fixed weight;
    for (int i : members) weight += weights[i];
    bool better;
    if (best.empty() || weight > best_weight) {
      better = true;
    } else if (weight < best_weight) {
      better = false;
    } else {
      bool has_lowest = mask & (1u << lowest_present);
      bool best_has_lowest =
          std::find(best.begin(), best.end(), lowest_present) != best.end();
      if (has_lowest != best_has_lowest)
        better = has_lowest;
      else
        better = members < best;  // lexicographically smaller index set
    }
    if (better) {
      best = std::move(members);
      best_weight = weight;
    }
  }

  QualifiedSample out;
  out.value.tau = average_channel(inputs, best, &SampleTriple::tau);
  out.value.psi = average_channel(inputs, best, &SampleTriple::psi);
  out.value.rho = average_channel(inputs, best, &SampleTriple::rho);
  out.reliability = best_weight;
  return out;
}

namespace {

std::string text_config(CallContext& ctx, const std::string& key) {
  Value v = ctx.read(key);
  if (!v.is_text())
    throw ContractError{FaultKind::kBadArgument,
                        "missing configuration entry '" + key + "'"};
  return v.text();
}

Fixed number_config(CallContext& ctx, const std::string& key) {
  Value v = ctx.read(key);
  if (!v.is_number())
    throw ContractError{FaultKind::kBadArgument,
                        "missing configuration entry '" + key + "'"};
  return v.number();
}

int stakeholder_index(const Address& addr) {
  if (addr.kind != AddressKind::kSource) return -1;
  for (int i = 0; i < 3; ++i)
    if (addr.id == kSourceIds[i]) return i;
  return -1;
}

void require_oracle(const CallContext& ctx, const std::string& method) {
  if (ctx.proposer().kind != AddressKind::kOracle)
    throw ContractError{FaultKind::kBadArgument,
                        method + " may only be proposed by the time oracle"};
}

void require_caller(const CallContext& ctx, const std::string& expected,
                    const std::string& method) {
  if (!ctx.calling_contract() || *ctx.calling_contract() != expected)
    throw ContractError{FaultKind::kBadArgument,
                        method + " may only be called by " + expected};
}

std::int64_t counter_value(const Value& v) {
  if (v.is_null()) return 0;
  return v.number().millis() / Fixed::kScale;
}

class DataQualifierContract : public Contract {
 public:
  Value invoke(CallContext& ctx, const std::string& method,
               const ValueList& args) override {
    if (method == "addHourlySample") return add_hourly_sample(ctx, args);
    if (method == "addDailySample") return add_daily_sample(ctx, args);
    if (method == "midnightProcess") return midnight_process(ctx, args);
    if (method == "monthEndProcess") return month_end_process(ctx, args);
    throw ContractError{FaultKind::kUnknownMethod,
                        "data qualifier has no method '" + method + "'"};
  }

 private:
  Value add_hourly_sample(CallContext& ctx, const ValueList& args) {
    require_arg_count(args, 3, "addHourlySample");
    int source = stakeholder_index(ctx.proposer());
    if (source < 0)
      throw ContractError{FaultKind::kBadArgument,
                          "proposer '" + ctx.proposer().id +
                              "' is not an authorized weather stakeholder"};
    int day = static_cast<int>(int_arg(args[0], "day", 1, 31));
    int hour = static_cast<int>(int_arg(args[1], "hour", 0, 23));
    Value checked = ctx.call(text_config(ctx, "config/validator"),
                             "checkVariable", {args[2]});
    const std::string slot = pi_key(source, day, hour);
    // The slot is read before being replaced so that two writers for the
    // same hour serialize under optimistic validation.
    ctx.read(slot);
    ctx.write(slot, checked);
    return Value(true);
  }

  Value add_daily_sample(CallContext& ctx, const ValueList& args) {
    require_arg_count(args, 2, "addDailySample");
    const Address& p = ctx.proposer();
    if (p.kind != AddressKind::kSource || p.id != kSourceIds[3])
      throw ContractError{FaultKind::kBadArgument,
                          "proposer '" + p.id +
                              "' is not the authorized consumption meter"};
    int day = static_cast<int>(int_arg(args[0], "day", 1, 31));
    if (!args[1].is_null() && !args[1].is_number())
      throw ContractError{FaultKind::kBadArgument,
                          "consumption must be a number or null"};
    const std::string slot = cons_key(day);
    ctx.read(slot);
    ctx.write(slot, args[1]);
    return Value(true);
  }

  Value midnight_process(CallContext& ctx, const ValueList& args) {
    require_arg_count(args, 1, "midnightProcess");
    require_oracle(ctx, "midnightProcess");
    int day = static_cast<int>(int_arg(args[0], "day", 1, 31));

    VotingTolerances tol{number_config(ctx, "config/tol/tau"),
                         number_config(ctx, "config/tol/psi"),
                         number_config(ctx, "config/tol/rho")};
    std::array<Fixed, 3> weights;
    for (int u = 0; u < 3; ++u) weights[u] = number_config(ctx, weight_key(u));

    bool present[3][24] = {};
    for (int hour = 0; hour < 24; ++hour) {
      std::array<std::optional<SampleTriple>, 3> inputs;
      for (int u = 0; u < 3; ++u) {
        Value v = ctx.read(pi_key(u, day, hour));
        if (!v.is_null()) {
          inputs[u] = triple_arg(v, "stored sample");
          present[u][hour] = true;
        }
      }
      if (inputs[0] || inputs[1] || inputs[2]) {
        QualifiedSample q = qualify_by_voting(inputs, weights, tol);
        ctx.write(gamma_key(hour), Value(q.value));
        ctx.write(gamma_rel_key(hour), Value(q.reliability));
      } else {
        ctx.write(gamma_key(hour), Value(SampleTriple{}));
        ctx.write(gamma_rel_key(hour), Value(Fixed{}));
      }
    }

    ctx.call(text_config(ctx, "config/predictor"), "predictDailyCons",
             {Value(Fixed::from_int(day))});

    for (int u = 0; u < 3; ++u)
      for (int hour = 0; hour < 24; ++hour)
        if (present[u][hour]) ctx.write(pi_key(u, day, hour), Value::null());
    if (!ctx.read(cons_key(day)).is_null())
      ctx.write(cons_key(day), Value::null());
    return Value(true);
  }

  Value month_end_process(CallContext& ctx, const ValueList& args) {
    require_arg_count(args, 0, "monthEndProcess");
    require_oracle(ctx, "monthEndProcess");
    Value saving = ctx.call(text_config(ctx, "config/predictor"),
                            "computeMonthlySaving", {});
    Value ok = ctx.call(text_config(ctx, "config/validator"),
                        "validateMonthlySaving", {saving});
    ctx.call(text_config(ctx, "config/aggregator"), "addMonthlySaving",
             {saving});
    return ok;
  }
};

class PredictorContract : public Contract {
 public:
  Value invoke(CallContext& ctx, const std::string& method,
               const ValueList& args) override {
    if (method == "predictCons") {
      require_arg_count(args, 0, "predictCons");
      return Value(predict(ctx));
    }
    if (method == "predictDailyCons") return predict_daily_cons(ctx, args);
    if (method == "computeMonthlySaving") {
      require_arg_count(args, 0, "computeMonthlySaving");
      require_caller(ctx, text_config(ctx, "config/qualifier"),
                     "computeMonthlySaving");
      Value savings = ctx.call(text_config(ctx, "config/aggregator"),
                               "getDailySavings", {});
      Fixed sum;
      for (const Value& v : savings.list())
        sum += number_arg(v, "daily saving entry");
      return Value(sum);
    }
    throw ContractError{FaultKind::kUnknownMethod,
                        "predictor has no method '" + method + "'"};
  }

 private:
  Fixed predict(CallContext& ctx) {
    const std::string qualifier = text_config(ctx, "config/qualifier");
    PredictorModel model{number_config(ctx, "config/model/base_load"),
                         number_config(ctx, "config/model/hdd_coefficient"),
                         number_config(ctx, "config/model/base_temperature")};
    Fixed sum;
    int count = 0;
    for (int hour = 0; hour < 24; ++hour) {
      Value g = ctx.read_of(qualifier, gamma_key(hour));
      if (g.is_null()) continue;
      const SampleTriple& t = triple_arg(g, "qualified sample");
      if (t.tau) {
        sum += *t.tau;
        ++count;
      }
    }
    if (count == 0) return model.base_load;
    Fixed mean = sum / Fixed::from_int(count);
    Fixed hdd = Fixed::max(Fixed{}, model.base_temperature - mean);
    return model.base_load + model.hdd_coefficient * hdd;
  }

  Value predict_daily_cons(CallContext& ctx, const ValueList& args) {
    require_arg_count(args, 1, "predictDailyCons");
    const std::string qualifier = text_config(ctx, "config/qualifier");
    require_caller(ctx, qualifier, "predictDailyCons");
    int day = static_cast<int>(int_arg(args[0], "day", 1, 31));
    Fixed predicted = predict(ctx);
    Value actual = ctx.read_of(qualifier, cons_key(day));
    Fixed saving;  // a day without a consumption sample contributes zero
    if (!actual.is_null())
      saving = predicted - number_arg(actual, "stored consumption");
    ctx.call(text_config(ctx, "config/aggregator"), "addDailySaving",
             {Value(saving)});
    return Value(true);
  }
};

class AggregatorContract : public Contract {
 public:
  Value invoke(CallContext& ctx, const std::string& method,
               const ValueList& args) override {
    if (method == "addDailySaving") {
      require_arg_count(args, 1, "addDailySaving");
      require_caller(ctx, text_config(ctx, "config/predictor"),
                     "addDailySaving");
      Fixed v = number_arg(args[0], "daily saving");
      std::int64_t n = counter_value(ctx.read(kSigmaDailyCount));
      ctx.write(sigma_daily_key(n), Value(v));
      ctx.write(kSigmaDailyCount, Value(Fixed::from_int(n + 1)));
      return Value(true);
    }
    if (method == "addMonthlySaving") {
      require_arg_count(args, 1, "addMonthlySaving");
      require_caller(ctx, text_config(ctx, "config/qualifier"),
                     "addMonthlySaving");
      Fixed v = number_arg(args[0], "monthly saving");
      std::int64_t n = counter_value(ctx.read(kSigmaMonthlyCount));
      ctx.write(sigma_monthly_key(n), Value(v));
      ctx.write(kSigmaMonthlyCount, Value(Fixed::from_int(n + 1)));
      return Value(true);
    }
    if (method == "getDailySavings") {
      require_arg_count(args, 0, "getDailySavings");
      require_caller(ctx, text_config(ctx, "config/predictor"),
                     "getDailySavings");
      std::int64_t n = counter_value(ctx.read(kSigmaDailyCount));
      ValueList out;
      out.reserve(static_cast<std::size_t>(n));
      for (std::int64_t i = 0; i < n; ++i)
        out.push_back(ctx.read(sigma_daily_key(i)));
      return Value(std::move(out));
    }
    throw ContractError{FaultKind::kUnknownMethod,
                        "aggregator has no method '" + method + "'"};
  }
};

class ValidatorContract : public Contract {
 public:
  Value invoke(CallContext& ctx, const std::string& method,
               const ValueList& args) override {
    (void)ctx;
    if (method == "checkVariable") {
      require_arg_count(args, 1, "checkVariable");
      return Value(clamp_sample(triple_arg(args[0], "sample")));
    }
    if (method == "validateMonthlySaving") {
      require_arg_count(args, 1, "validateMonthlySaving");
      Fixed s = number_arg(args[0], "monthly saving");
      return Value(s >= Fixed{});
    }
    throw ContractError{FaultKind::kUnknownMethod,
                        "validator has no method '" + method + "'"};
  }
};

}  // namespace

void deploy_tepc(ContractRegistry& registry, WorldState& state,
                 const DeploymentConfig& config, std::uint64_t step) {
  registry.deploy(kDataQualifier, std::make_shared<DataQualifierContract>(),
                  step);
  registry.deploy(kPredictor, std::make_shared<PredictorContract>(), step);
  registry.deploy(kAggregator, std::make_shared<AggregatorContract>(), step);
  registry.deploy(kValidator, std::make_shared<ValidatorContract>(), step);

  std::map<StateKey, Value> genesis;
  const auto dq = [&](const std::string& key, Value v) {
    genesis.emplace(StateKey{kDataQualifier, key}, std::move(v));
  };
  dq("config/validator", Value(kValidator));
  dq("config/predictor", Value(kPredictor));
  dq("config/aggregator", Value(kAggregator));
  dq("config/tol/tau", Value(config.voting.tau));
  dq("config/tol/psi", Value(config.voting.psi));
  dq("config/tol/rho", Value(config.voting.rho));
  for (int u = 0; u < 3; ++u)
    dq(weight_key(u), Value(config.weights.w[u]));

  const auto pred = [&](const std::string& key, Value v) {
    genesis.emplace(StateKey{kPredictor, key}, std::move(v));
  };
  pred("config/qualifier", Value(kDataQualifier));
  pred("config/aggregator", Value(kAggregator));
  pred("config/model/base_load", Value(config.model.base_load));
  pred("config/model/hdd_coefficient", Value(config.model.hdd_coefficient));
  pred("config/model/base_temperature", Value(config.model.base_temperature));

  const auto agg = [&](const std::string& key, Value v) {
    genesis.emplace(StateKey{kAggregator, key}, std::move(v));
  };
  agg("config/predictor", Value(kPredictor));
  agg("config/qualifier", Value(kDataQualifier));

  state.apply(genesis);
}

}  // namespace epochsim::tepc
