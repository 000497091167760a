// SPDX-License-Identifier: Apache-2.0
#include "epochsim/ledger.hpp"

#include <nlohmann/json.hpp>

namespace epochsim {

using ordered_json = nlohmann::ordered_json;

std::string_view receipt_status_name(ReceiptStatus status) {
  switch (status) {
    case ReceiptStatus::kApplied: return "applied";
    case ReceiptStatus::kFailedException: return "failed_exception";
    case ReceiptStatus::kInvalidatedBlockFault: return "invalidated_block_fault";
    case ReceiptStatus::kInvalidatedMvccConflict:
      return "invalidated_mvcc_conflict";
    case ReceiptStatus::kRejectedAtEndorsement:
      return "rejected_at_endorsement";
  }
  return "unknown";
}

namespace {

ordered_json value_json(const Value& value);

ordered_json channel_json(const std::optional<Fixed>& channel) {
  if (!channel) return nullptr;
  return channel->str();
}

ordered_json value_json(const Value& value) {
  ordered_json j;
  j["type"] = std::string(value.type_name());
  if (value.is_number()) {
    j["value"] = value.number().str();
  } else if (value.is_bool()) {
    j["value"] = value.boolean();
  } else if (value.is_text()) {
    j["value"] = value.text();
  } else if (value.is_triple()) {
    const SampleTriple& t = value.triple();
    j["tau"] = channel_json(t.tau);
    j["psi"] = channel_json(t.psi);
    j["rho"] = channel_json(t.rho);
  } else if (value.is_list()) {
    ordered_json items = ordered_json::array();
    for (const Value& item : value.list()) items.push_back(value_json(item));
    j["items"] = std::move(items);
  }
  return j;
}

const char* address_kind_name(AddressKind kind) {
  switch (kind) {
    case AddressKind::kContract: return "contract";
    case AddressKind::kSource: return "source";
    case AddressKind::kOracle: return "oracle";
    case AddressKind::kProposer: return "proposer";
  }
  return "unknown";
}

ordered_json address_json(const Address& a) {
  return {{"kind", address_kind_name(a.kind)}, {"id", a.id}};
}

ordered_json tx_json(const Transaction& tx) {
  ordered_json args = ordered_json::array();
  for (const Value& arg : tx.args) args.push_back(value_json(arg));
  return {{"txid", tx.txid},
          {"proposer", address_json(tx.proposer)},
          {"target", address_json(tx.target)},
          {"method", tx.method},
          {"args", std::move(args)},
          {"proposed_at_step", tx.proposed_at_step},
          {"arrival_seq", tx.arrival_seq}};
}

}  // namespace

std::string serialize_value(const Value& value) {
  return value_json(value).dump();
}

std::string serialize_state(const WorldState& state) {
  ordered_json entries = ordered_json::array();
  for (const auto& [key, entry] : state.entries()) {
    entries.push_back({{"contract", key.contract},
                       {"key", key.key},
                       {"value", value_json(entry.value)},
                       {"version", entry.version}});
  }
  return entries.dump();
}

std::string serialize_chain(const std::vector<Block>& chain) {
  ordered_json blocks = ordered_json::array();
  for (const Block& block : chain) {
    ordered_json txs = ordered_json::array();
    for (const Transaction& tx : block.txs) txs.push_back(tx_json(tx));
    blocks.push_back(
        {{"height", block.height},
         {"step", block.step},
         {"status",
          block.status == BlockStatus::kCommitted ? "committed" : "invalidated"},
         {"txs", std::move(txs)}});
  }
  return blocks.dump();
}

std::string serialize_receipts(const std::vector<Receipt>& receipts) {
  ordered_json out = ordered_json::array();
  for (const Receipt& r : receipts) {
    ordered_json j = {{"txid", r.txid},
                      {"status", std::string(receipt_status_name(r.status))},
                      {"reason", r.reason}};
    if (r.step_committed)
      j["step_committed"] = *r.step_committed;
    else
      j["step_committed"] = nullptr;
    out.push_back(std::move(j));
  }
  return out.dump();
}

}  // namespace epochsim
