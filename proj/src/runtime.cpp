// SPDX-License-Identifier: Apache-2.0
#include "epochsim/runtime.hpp"

namespace epochsim {

std::string_view fault_kind_name(FaultKind kind) {
  switch (kind) {
    case FaultKind::kNullValue: return "null_value";
    case FaultKind::kNotDeployed: return "not_deployed";
    case FaultKind::kUnknownMethod: return "unknown_method";
    case FaultKind::kBadArgument: return "bad_argument";
    case FaultKind::kDepthExceeded: return "depth_exceeded";
  }
  return "unknown";
}

std::string ContractFault::describe() const {
  return std::string(fault_kind_name(kind)) + ": " + message;
}

namespace detail {

struct Session {
  const ContractRegistry& registry;
  const WorldState& base;
  std::uint64_t exec_step;
  const Transaction& tx;
  ReadWriteSet rwset;
  int depth = 0;

  static constexpr int kMaxDepth = 8;
};

}  // namespace detail

namespace {

Value read_key(detail::Session& session, const StateKey& key) {
  if (auto w = session.rwset.writes.find(key); w != session.rwset.writes.end())
    return w->second;
  const StateEntry* entry = session.base.find(key);
  session.rwset.reads.try_emplace(
      key, entry ? std::optional<std::uint64_t>(entry->version) : std::nullopt);
  return entry ? entry->value : Value::null();
}

}  // namespace

Value CallContext::read(const std::string& key) {
  return read_key(session_, StateKey{self_, key});
}

Value CallContext::read_of(const std::string& contract,
                           const std::string& key) {
  return read_key(session_, StateKey{contract, key});
}

void CallContext::write(const std::string& key, Value value) {
  session_.rwset.writes.insert_or_assign(StateKey{self_, key},
                                         std::move(value));
}

const Address& CallContext::proposer() const { return session_.tx.proposer; }

int CallContext::depth() const { return session_.depth; }

Value CallContext::call(const std::string& contract, const std::string& method,
                        ValueList args) {
  if (session_.depth + 1 > detail::Session::kMaxDepth)
    throw ContractError{FaultKind::kDepthExceeded,
                        "call depth limit exceeded calling " + contract + "." +
                            method};
  const ContractRegistry::Entry* entry =
      session_.registry.find(contract, session_.exec_step);
  if (!entry)
    throw ContractError{FaultKind::kNotDeployed,
                        "no contract deployed at '" + contract + "'"};
  ++session_.depth;
  CallContext callee(session_, contract, self_);
  Value ret = entry->contract->invoke(callee, method, std::move(args));
  --session_.depth;
  return ret;
}

ExecResult execute(const ContractRegistry& registry, const WorldState& base,
                   const Transaction& tx, std::uint64_t exec_step) {
  detail::Session session{registry, base, exec_step, tx, {}, 0};
  const ContractRegistry::Entry* entry = registry.find(tx.target.id, exec_step);
  if (!entry)
    return {std::nullopt,
            ContractFault{FaultKind::kNotDeployed,
                          "no contract deployed at '" + tx.target.id + "'"}};
  session.depth = 1;
  CallContext ctx(session, tx.target.id, std::nullopt);
  try {
    Value ret = entry->contract->invoke(ctx, tx.method, tx.args);
    return {ExecOutcome{std::move(session.rwset), std::move(ret)},
            std::nullopt};
  } catch (const ContractError& err) {
    return {std::nullopt, ContractFault{err.kind, err.message}};
  }
}

Fixed number_arg(const Value& value, const std::string& what) {
  if (value.is_null())
    throw ContractError{FaultKind::kNullValue,
                        what + " is null where a number is required"};
  if (!value.is_number())
    throw ContractError{FaultKind::kBadArgument,
                        what + " must be a number, got " +
                            std::string(value.type_name())};
  return value.number();
}

std::int64_t int_arg(const Value& value, const std::string& what,
                     std::int64_t lo, std::int64_t hi) {
  Fixed n = number_arg(value, what);
  if (n.millis() % Fixed::kScale != 0)
    throw ContractError{FaultKind::kBadArgument, what + " must be integral"};
  std::int64_t units = n.millis() / Fixed::kScale;
  if (units < lo || units > hi)
    throw ContractError{FaultKind::kBadArgument,
                        what + " out of range [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]"};
  return units;
}

const SampleTriple& triple_arg(const Value& value, const std::string& what) {
  if (value.is_null())
    throw ContractError{FaultKind::kNullValue,
                        what + " is null where a sample is required"};
  if (!value.is_triple())
    throw ContractError{FaultKind::kBadArgument,
                        what + " must be a sample, got " +
                            std::string(value.type_name())};
  return value.triple();
}

void require_arg_count(const ValueList& args, std::size_t count,
                       const std::string& method) {
  if (args.size() != count)
    throw ContractError{FaultKind::kBadArgument,
                        method + " expects " + std::to_string(count) +
                            " argument(s), got " + std::to_string(args.size())};
}

}  // namespace epochsim
