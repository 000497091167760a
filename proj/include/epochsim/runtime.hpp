// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "epochsim/ledger.hpp"

namespace epochsim {

enum class FaultKind {
  kNullValue,
  kNotDeployed,
  kUnknownMethod,
  kBadArgument,
  kDepthExceeded,
};

std::string_view fault_kind_name(FaultKind kind);

// Thrown by contract code. Faults are not catchable inside contracts: the
// runtime unwinds the whole call tree and discards every buffered write.
struct ContractError {
  FaultKind kind;
  std::string message;
};

struct ContractFault {
  FaultKind kind;
  std::string message;

  // Deterministic receipt text, e.g. "null_value: ...".
  std::string describe() const;
};

class CallContext;

class Contract {
 public:
  virtual ~Contract() = default;
  virtual Value invoke(CallContext& ctx, const std::string& method,
                       const ValueList& args) = 0;
};

class ContractRegistry {
 public:
  void deploy(std::string id, std::shared_ptr<Contract> contract,
              std::uint64_t step) {
    contracts_[std::move(id)] = {std::move(contract), step};
  }

  struct Entry {
    std::shared_ptr<Contract> contract;
    std::uint64_t deployed_at_step = 0;
  };

  // Returns nullptr when the id is unknown or not yet deployed at `step`.
  const Entry* find(const std::string& id, std::uint64_t step) const {
    auto it = contracts_.find(id);
    if (it == contracts_.end() || it->second.deployed_at_step > step)
      return nullptr;
    return &it->second;
  }

 private:
  std::map<std::string, Entry> contracts_;
};

struct ExecOutcome {
  ReadWriteSet rwset;
  Value ret;
};

struct ExecResult {
  std::optional<ExecOutcome> outcome;
  std::optional<ContractFault> fault;

  bool ok() const { return outcome.has_value(); }
};

// Executes a transaction against a committed-state view. The base state is
// never mutated; every write lands in the returned read-write set. The
// result is a pure function of (registry, base, tx, exec_step).
ExecResult execute(const ContractRegistry& registry, const WorldState& base,
                   const Transaction& tx, std::uint64_t exec_step);

namespace detail {
struct Session;
}

// Per-frame view of the shared execution session. Nested contract calls run
// in the same session (flat transaction semantics): one read-write set,
// read-your-own-writes, all-or-nothing.
class CallContext {
 public:
  // Reads from this contract's own state.
  Value read(const std::string& key);
  // Reads another contract's state (cross-contract reads are version-tracked
  // exactly like own-state reads).
  Value read_of(const std::string& contract, const std::string& key);
  // Writes are confined to the executing contract's own namespace.
  void write(const std::string& key, Value value);

  Value call(const std::string& contract, const std::string& method,
             ValueList args);

  const Address& proposer() const;
  // Id of the contract that invoked this one; nullopt for the transaction's
  // entry call.
  const std::optional<std::string>& calling_contract() const {
    return caller_;
  }
  const std::string& self() const { return self_; }
  int depth() const;

 private:
  friend ExecResult execute(const ContractRegistry&, const WorldState&,
                            const Transaction&, std::uint64_t);
  CallContext(detail::Session& session, std::string self,
              std::optional<std::string> caller)
      : session_(session), self_(std::move(self)), caller_(std::move(caller)) {}

  detail::Session& session_;
  std::string self_;
  std::optional<std::string> caller_;
};

// Checked argument and value accessors used by contract code.
Fixed number_arg(const Value& value, const std::string& what);
std::int64_t int_arg(const Value& value, const std::string& what,
                     std::int64_t lo, std::int64_t hi);
const SampleTriple& triple_arg(const Value& value, const std::string& what);
void require_arg_count(const ValueList& args, std::size_t count,
                       const std::string& method);

// Raised when a simulator-internal guarantee is violated (for example
// endorsers disagreeing on a deterministic execution). Maps to exit code 3.
struct InternalError {
  std::string message;
};

}  // namespace epochsim
