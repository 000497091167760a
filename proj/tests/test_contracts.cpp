// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "epochsim/contracts.hpp"
#include "support.hpp"

using namespace epochsim;
namespace tepc = epochsim::tepc;

namespace {

Fixed F(std::int64_t units) { return Fixed::from_int(units); }

SampleTriple sample(const char* tau, const char* psi, const char* rho) {
  return SampleTriple{Fixed::parse(tau), Fixed::parse(psi), Fixed::parse(rho)};
}

struct TepcFixture {
  ContractRegistry registry;
  WorldState state;

  TepcFixture() { tepc::deploy_tepc(registry, state, {}, 0); }

  ExecResult exec(Address proposer, const char* target, const char* method,
                  ValueList args) {
    Transaction tx;
    tx.proposer = std::move(proposer);
    tx.target = tepc::contract_address(target);
    tx.method = method;
    tx.args = std::move(args);
    return execute(registry, state, tx, 100);
  }

  Value commit(Address proposer, const char* target, const char* method,
               ValueList args) {
    ExecResult r = exec(std::move(proposer), target, method, std::move(args));
    REQUIRE_MESSAGE(r.ok(), (r.fault ? r.fault->describe() : std::string()));
    state.apply(r.outcome->rwset.writes);
    return r.outcome->ret;
  }

  const Value& at(const char* contract, const std::string& key) {
    const StateEntry* entry = state.find({contract, key});
    REQUIRE(entry != nullptr);
    return entry->value;
  }

  void add_sample(int source, int day, int hour, SampleTriple t) {
    commit(tepc::source_address(source), tepc::kDataQualifier, "addHourlySample",
           {Value(F(day)), Value(F(hour)), Value(std::move(t))});
  }
};

}  // namespace

TEST_CASE("clamping pins every channel to its physical range") {
  CHECK(tepc::clamp_sample(sample("-35", "900", "50")) ==
        sample("-30", "900", "50"));
  CHECK(tepc::clamp_sample(sample("70", "800", "120")) ==
        sample("60", "850", "100"));
  CHECK(tepc::clamp_sample(sample("20", "1000", "50")) ==
        sample("20", "1000", "50"));
  CHECK(tepc::clamp_sample(sample("-30", "850", "0")) ==
        sample("-30", "850", "0"));
  CHECK(tepc::clamp_sample(sample("60", "1060", "100")) ==
        sample("60", "1060", "100"));
}

TEST_CASE("clamping a null channel faults, channels checked in order") {
  auto message_for = [](SampleTriple t) {
    try {
      tepc::clamp_sample(t);
      return std::string();
    } catch (const ContractError& e) {
      CHECK(e.kind == FaultKind::kNullValue);
      return e.message;
    }
  };
  SampleTriple all_null;
  CHECK(message_for(all_null) == "comparison on null channel tau");
  CHECK(message_for({std::nullopt, F(1000), F(50)}) ==
        "comparison on null channel tau");
  CHECK(message_for({F(20), std::nullopt, F(50)}) ==
        "comparison on null channel psi");
  CHECK(message_for({F(20), F(1000), std::nullopt}) ==
        "comparison on null channel rho");
}

TEST_CASE("state paths are stable") {
  CHECK(tepc::pi_key(0, 2, 5) == "pi/u0/d02/h05");
  CHECK(tepc::pi_key(2, 31, 23) == "pi/u2/d31/h23");
  CHECK(tepc::cons_key(2) == "pi/u3/d02");
  CHECK(tepc::gamma_key(0) == "gamma/h00");
  CHECK(tepc::gamma_rel_key(13) == "gamma/h13/rel");
  CHECK(tepc::sigma_daily_key(0) == "sigma_d/0");
  CHECK(tepc::sigma_monthly_key(4) == "sigma_m/4");
  CHECK(tepc::weight_key(1) == "weights/u1");
}

TEST_CASE("deployment seeds wiring, tolerances, weights and model as genesis") {
  TepcFixture f;
  CHECK(f.at(tepc::kDataQualifier, "config/validator") == Value(tepc::kValidator));
  CHECK(f.at(tepc::kDataQualifier, "config/tol/tau") == Value(Fixed::parse("1.0")));
  CHECK(f.at(tepc::kDataQualifier, "weights/u2") == Value(F(1)));
  CHECK(f.at(tepc::kPredictor, "config/model/base_load") == Value(F(50)));
  CHECK(f.at(tepc::kPredictor, "config/model/base_temperature") == Value(F(18)));
  CHECK(f.state.find({tepc::kDataQualifier, "config/tol/tau"})->version == 0);
}

TEST_CASE("hourly samples are validated, clamped and stored per source and hour") {
  TepcFixture f;
  f.add_sample(0, 2, 5, sample("20", "1000", "50"));
  CHECK(f.at(tepc::kDataQualifier, "pi/u0/d02/h05") ==
        Value(sample("20", "1000", "50")));

  f.add_sample(1, 2, 5, sample("70", "800", "120"));
  CHECK(f.at(tepc::kDataQualifier, "pi/u1/d02/h05") ==
        Value(sample("60", "850", "100")));
}

TEST_CASE("a resubmitted hour simply overwrites the slot") {
  TepcFixture f;
  f.add_sample(0, 2, 5, sample("20", "1000", "50"));
  f.add_sample(0, 2, 5, SampleTriple{Fixed(), Fixed(), Fixed()});
  CHECK(f.at(tepc::kDataQualifier, "pi/u0/d02/h05") ==
        Value(sample("0", "850", "0")));
  CHECK(f.state.find({tepc::kDataQualifier, "pi/u0/d02/h05"})->version == 1);
}

TEST_CASE("hourly samples with a null channel fault") {
  TepcFixture f;
  ExecResult r = f.exec(tepc::source_address(2), tepc::kDataQualifier,
                        "addHourlySample",
                        {Value(F(2)), Value(F(2)), Value(SampleTriple{})});
  CHECK(!r.ok());
  CHECK(r.fault->kind == FaultKind::kNullValue);
}

TEST_CASE("only weather stakeholders may add hourly samples") {
  TepcFixture f;
  for (Address bad : {tepc::oracle_address(), tepc::source_address(3)}) {
    ExecResult r =
        f.exec(bad, tepc::kDataQualifier, "addHourlySample",
               {Value(F(2)), Value(F(5)), Value(sample("20", "1000", "50"))});
    CHECK(!r.ok());
    CHECK(r.fault->kind == FaultKind::kBadArgument);
  }
}

TEST_CASE("hourly sample arguments are checked") {
  TepcFixture f;
  auto bad = [&](ValueList args) {
    ExecResult r = f.exec(tepc::source_address(0), tepc::kDataQualifier,
                          "addHourlySample", std::move(args));
    CHECK(!r.ok());
    CHECK(r.fault->kind == FaultKind::kBadArgument);
  };
  bad({Value(F(2)), Value(F(5))});
  bad({Value(F(0)), Value(F(5)), Value(sample("20", "1000", "50"))});
  bad({Value(F(2)), Value(F(24)), Value(sample("20", "1000", "50"))});
  bad({Value(Fixed::parse("2.5")), Value(F(5)), Value(sample("20", "1000", "50"))});
}

TEST_CASE("daily consumption lands in a single per-day slot, null allowed") {
  TepcFixture f;
  f.commit(tepc::source_address(3), tepc::kDataQualifier, "addDailySample",
           {Value(F(2)), Value(F(120))});
  CHECK(f.at(tepc::kDataQualifier, "pi/u3/d02") == Value(F(120)));

  f.commit(tepc::source_address(3), tepc::kDataQualifier, "addDailySample",
           {Value(F(2)), Value()});
  CHECK(f.at(tepc::kDataQualifier, "pi/u3/d02").is_null());

  ExecResult r = f.exec(tepc::source_address(0), tepc::kDataQualifier,
                        "addDailySample", {Value(F(2)), Value(F(120))});
  CHECK(!r.ok());
  CHECK(r.fault->kind == FaultKind::kBadArgument);

  r = f.exec(tepc::source_address(3), tepc::kDataQualifier, "addDailySample",
             {Value(F(2)), Value("oops")});
  CHECK(!r.ok());
  CHECK(r.fault->kind == FaultKind::kBadArgument);
}

TEST_CASE("midnight qualifies the day, predicts, records and clears") {
  TepcFixture f;
  for (int u = 0; u < 3; ++u) f.add_sample(u, 2, 0, sample("10", "1000", "50"));
  f.commit(tepc::source_address(3), tepc::kDataQualifier, "addDailySample",
           {Value(F(2)), Value(F(120))});

  Value ret = f.commit(tepc::oracle_address(), tepc::kDataQualifier,
                       "midnightProcess", {Value(F(2))});
  CHECK(ret == Value(true));

  CHECK(f.at(tepc::kDataQualifier, "gamma/h00") ==
        Value(sample("10", "1000", "50")));
  CHECK(f.at(tepc::kDataQualifier, "gamma/h00/rel") == Value(F(3)));
  CHECK(f.at(tepc::kDataQualifier, "gamma/h01") == Value(SampleTriple{}));
  CHECK(f.at(tepc::kDataQualifier, "gamma/h01/rel") == Value(Fixed()));

  // Mean qualified temperature 10 over the one reported hour: predicted
  // consumption 50 + 10 * (18 - 10) = 130, saving 130 - 120 = 10.
  CHECK(f.at(tepc::kAggregator, "sigma_d/0") == Value(F(10)));
  CHECK(f.at(tepc::kAggregator, "sigma_d/count") == Value(F(1)));

  CHECK(f.at(tepc::kDataQualifier, "pi/u0/d02/h00").is_null());
  CHECK(f.at(tepc::kDataQualifier, "pi/u1/d02/h00").is_null());
  CHECK(f.at(tepc::kDataQualifier, "pi/u2/d02/h00").is_null());
  CHECK(f.at(tepc::kDataQualifier, "pi/u3/d02").is_null());
}

TEST_CASE("a day without any data still records a zero saving") {
  TepcFixture f;
  f.commit(tepc::oracle_address(), tepc::kDataQualifier, "midnightProcess",
           {Value(F(3))});
  CHECK(f.at(tepc::kAggregator, "sigma_d/0") == Value(Fixed()));
  CHECK(f.at(tepc::kAggregator, "sigma_d/count") == Value(F(1)));
}

TEST_CASE("midnight is oracle-only") {
  TepcFixture f;
  ExecResult r = f.exec(tepc::source_address(0), tepc::kDataQualifier,
                        "midnightProcess", {Value(F(2))});
  CHECK(!r.ok());
  CHECK(r.fault->kind == FaultKind::kBadArgument);
}

TEST_CASE("prediction from qualified temperatures") {
  TepcFixture f;
  std::map<StateKey, Value> gammas;
  gammas[{tepc::kDataQualifier, tepc::gamma_key(0)}] =
      Value(sample("10", "1000", "50"));
  gammas[{tepc::kDataQualifier, tepc::gamma_key(1)}] =
      Value(sample("10", "1000", "50"));
  f.state.apply(gammas);

  Value ret = f.commit(tepc::oracle_address(), tepc::kPredictor, "predictCons", {});
  CHECK(ret == Value(F(130)));
}

TEST_CASE("prediction without any temperature falls back to the base load") {
  TepcFixture f;
  Value ret = f.commit(tepc::oracle_address(), tepc::kPredictor, "predictCons", {});
  CHECK(ret == Value(F(50)));
}

TEST_CASE("month end sums the recorded days and stores the result") {
  TepcFixture f;
  f.state.apply({{{tepc::kAggregator, "sigma_d/0"}, Value(F(1))},
                 {{tepc::kAggregator, "sigma_d/1"}, Value(F(2))},
                 {{tepc::kAggregator, "sigma_d/2"}, Value(F(3))},
                 {{tepc::kAggregator, "sigma_d/count"}, Value(F(3))}});
  Value ok = f.commit(tepc::oracle_address(), tepc::kDataQualifier,
                      "monthEndProcess", {});
  CHECK(ok == Value(true));
  CHECK(f.at(tepc::kAggregator, "sigma_m/0") == Value(F(6)));
  CHECK(f.at(tepc::kAggregator, "sigma_m/count") == Value(F(1)));
}

TEST_CASE("a negative month fails validation but is still recorded") {
  TepcFixture f;
  f.state.apply({{{tepc::kAggregator, "sigma_d/0"}, Value(F(5))},
                 {{tepc::kAggregator, "sigma_d/1"}, Value(F(-10))},
                 {{tepc::kAggregator, "sigma_d/count"}, Value(F(2))}});
  Value ok = f.commit(tepc::oracle_address(), tepc::kDataQualifier,
                      "monthEndProcess", {});
  CHECK(ok == Value(false));
  CHECK(f.at(tepc::kAggregator, "sigma_m/0") == Value(F(-5)));
}

TEST_CASE("month end is oracle-only") {
  TepcFixture f;
  ExecResult r = f.exec(tepc::source_address(3), tepc::kDataQualifier,
                        "monthEndProcess", {});
  CHECK(!r.ok());
  CHECK(r.fault->kind == FaultKind::kBadArgument);
}

TEST_CASE("internal methods reject direct transactions") {
  TepcFixture f;
  const struct {
    const char* target;
    const char* method;
    ValueList args;
  } cases[] = {
      {tepc::kPredictor, "computeMonthlySaving", {}},
      {tepc::kPredictor, "predictDailyCons", {Value(F(2))}},
      {tepc::kAggregator, "addDailySaving", {Value(F(1))}},
      {tepc::kAggregator, "addMonthlySaving", {Value(F(1))}},
      {tepc::kAggregator, "getDailySavings", {}},
  };
  for (const auto& c : cases) {
    ExecResult r = f.exec(tepc::oracle_address(), c.target, c.method, c.args);
    CHECK(!r.ok());
    CHECK(r.fault->kind == FaultKind::kBadArgument);
  }
}

TEST_CASE("the validator is freely callable") {
  TepcFixture f;
  Value ret = f.commit(tepc::source_address(0), tepc::kValidator, "checkVariable",
                       {Value(sample("70", "800", "120"))});
  CHECK(ret == Value(sample("60", "850", "100")));
  CHECK(f.commit(tepc::source_address(0), tepc::kValidator,
                 "validateMonthlySaving", {Value(F(0))}) == Value(true));
  CHECK(f.commit(tepc::source_address(0), tepc::kValidator,
                 "validateMonthlySaving",
                 {Value(Fixed::parse("-0.001"))}) == Value(false));
}

TEST_CASE("unknown methods fault on every contract") {
  TepcFixture f;
  for (const char* target : {tepc::kDataQualifier, tepc::kPredictor,
                             tepc::kAggregator, tepc::kValidator}) {
    ExecResult r = f.exec(tepc::oracle_address(), target, "bogus", {});
    CHECK(!r.ok());
    CHECK(r.fault->kind == FaultKind::kUnknownMethod);
  }
}
