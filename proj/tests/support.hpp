// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "epochsim/contracts.hpp"
#include "epochsim/pipeline.hpp"
#include "epochsim/runtime.hpp"

namespace epochsim::testing {

// Minimal key-value contract used to exercise runtime and pipeline semantics
// without the full application stack.
//
//   put(key, value)        blind write
//   get(key)               read, returns the stored value
//   bump(key)              read-modify-write: stores old + 1, returns new
//   putget(key, value)     write then read back (read served from own writes)
//   fail()                 throws a bad-argument fault
//   writeThenFail(key)     writes, then faults (the write must not survive)
//   chain(n)               calls itself n more times through the registry
//   peek(contract, key)    cross-contract read
class KvContract : public Contract {
 public:
  explicit KvContract(std::string self_id) : self_id_(std::move(self_id)) {}

  Value invoke(CallContext& ctx, const std::string& method,
               const ValueList& args) override {
    if (method == "put") {
      require_arg_count(args, 2, "put");
      ctx.write(args[0].text(), args[1]);
      return Value(true);
    }
    if (method == "get") {
      require_arg_count(args, 1, "get");
      return ctx.read(args[0].text());
    }
    if (method == "bump") {
      require_arg_count(args, 1, "bump");
      Value old = ctx.read(args[0].text());
      Fixed next = (old.is_number() ? old.number() : Fixed()) + Fixed::from_int(1);
      ctx.write(args[0].text(), Value(next));
      return Value(next);
    }
    if (method == "putget") {
      require_arg_count(args, 2, "putget");
      ctx.write(args[0].text(), args[1]);
      return ctx.read(args[0].text());
    }
    if (method == "fail") {
      throw ContractError{FaultKind::kBadArgument, "fail was called"};
    }
    if (method == "writeThenFail") {
      require_arg_count(args, 1, "writeThenFail");
      ctx.write(args[0].text(), Value(Fixed::from_int(99)));
      throw ContractError{FaultKind::kBadArgument, "writeThenFail was called"};
    }
    if (method == "chain") {
      require_arg_count(args, 1, "chain");
      std::int64_t n = int_arg(args[0], "n", 0, 100);
      if (n == 0) return Value(Fixed::from_int(ctx.depth()));
      return ctx.call(self_id_, "chain", {Value(Fixed::from_int(n - 1))});
    }
    if (method == "peek") {
      require_arg_count(args, 2, "peek");
      return ctx.read_of(args[0].text(), args[1].text());
    }
    if (method == "invoke") {
      require_arg_count(args, 2, "invoke");
      return ctx.call(args[0].text(), args[1].text(), {});
    }
    if (method == "caller") {
      require_arg_count(args, 0, "caller");
      return ctx.calling_contract() ? Value(*ctx.calling_contract()) : Value();
    }
    throw ContractError{FaultKind::kUnknownMethod,
                        "kv has no method '" + method + "'"};
  }

 private:
  std::string self_id_;
};

inline void deploy_kv(ContractRegistry& registry, const std::string& id,
                      std::uint64_t step) {
  registry.deploy(id, std::make_shared<KvContract>(id), step);
}

inline Transaction kv_tx(const std::string& contract, const std::string& method,
                         ValueList args, std::uint64_t step = 0,
                         Address proposer = Address{AddressKind::kProposer, "p"}) {
  Transaction tx;
  tx.proposer = std::move(proposer);
  tx.target = Address{AddressKind::kContract, contract};
  tx.method = method;
  tx.args = std::move(args);
  tx.proposed_at_step = step;
  return tx;
}

// Reference implementation of the qualification vote, written independently
// of the library: scan all seven subsets, keep those whose members pairwise
// agree on every channel both report, and pick the heaviest with the same
// tie-breaking rules. Averages are recomputed here from scratch.
inline tepc::QualifiedSample oracle_vote(
    const std::array<std::optional<SampleTriple>, 3>& inputs,
    const std::array<Fixed, 3>& weights, const tepc::VotingTolerances& tol) {
  auto agree = [](const std::optional<Fixed>& a, const std::optional<Fixed>& b,
                  Fixed t) {
    if (!a.has_value() || !b.has_value()) return true;
    std::int64_t diff = a->millis() - b->millis();
    if (diff < 0) diff = -diff;
    return diff <= t.millis();
  };

  int lowest = -1;
  for (int i = 0; i < 3; ++i)
    if (inputs[static_cast<std::size_t>(i)] && lowest < 0) lowest = i;

  std::vector<int> best;
  Fixed best_weight;
  for (unsigned mask = 1; mask < 8; ++mask) {
    std::vector<int> members;
    bool all_present = true;
    for (int i = 0; i < 3; ++i) {
      if (!(mask & (1u << i))) continue;
      if (!inputs[static_cast<std::size_t>(i)]) all_present = false;
      members.push_back(i);
    }
    if (!all_present) continue;
    bool ok = true;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const SampleTriple& sa = *inputs[static_cast<std::size_t>(members[a])];
        const SampleTriple& sb = *inputs[static_cast<std::size_t>(members[b])];
        if (!agree(sa.tau, sb.tau, tol.tau) || !agree(sa.psi, sb.psi, tol.psi) ||
            !agree(sa.rho, sb.rho, tol.rho))
          ok = false;
      }
    }
    if (!ok) continue;
    Fixed weight;
    for (int i : members) weight += weights[static_cast<std::size_t>(i)];
    bool take = false;
    if (best.empty() || weight > best_weight) {
      take = true;
    } else if (weight == best_weight) {
      bool mine = std::find(members.begin(), members.end(), lowest) != members.end();
      bool theirs = std::find(best.begin(), best.end(), lowest) != best.end();
      if (mine != theirs)
        take = mine;
      else
        take = members < best;
    }
    if (take) {
      best = members;
      best_weight = weight;
    }
  }

  auto average = [&](std::optional<Fixed> SampleTriple::*channel) {
    Fixed sum;
    int n = 0;
    for (int i : best) {
      const std::optional<Fixed>& v =
          (*inputs[static_cast<std::size_t>(i)]).*channel;
      if (v) {
        sum += *v;
        ++n;
      }
    }
    return n == 0 ? std::optional<Fixed>()
                  : std::optional<Fixed>(sum / Fixed::from_int(n));
  };

  tepc::QualifiedSample out;
  out.value.tau = average(&SampleTriple::tau);
  out.value.psi = average(&SampleTriple::psi);
  out.value.rho = average(&SampleTriple::rho);
  out.reliability = best_weight;
  return out;
}

}  // namespace epochsim::testing
