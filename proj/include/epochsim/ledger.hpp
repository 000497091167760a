// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epochsim/value.hpp"

namespace epochsim {

enum class AddressKind { kContract, kSource, kOracle, kProposer };

struct Address {
  AddressKind kind = AddressKind::kProposer;
  std::string id;

  friend auto operator<=>(const Address&, const Address&) = default;
};

// World state is addressed by (owning contract, path within the contract).
struct StateKey {
  std::string contract;
  std::string key;

  friend auto operator<=>(const StateKey&, const StateKey&) = default;
};

struct StateEntry {
  Value value;
  std::uint64_t version = 0;

  friend bool operator==(const StateEntry&, const StateEntry&) = default;
};

// Versioned key-value store. A key's version starts at 0 on its first
// committed write and increases by exactly one per committed write; reads
// never change it.
class WorldState {
 public:
  const StateEntry* find(const StateKey& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  // Applies a write set atomically, bumping versions.
  void apply(const std::map<StateKey, Value>& writes) {
    for (const auto& [key, value] : writes) {
      auto it = entries_.find(key);
      if (it == entries_.end()) {
        entries_.emplace(key, StateEntry{value, 0});
      } else {
        it->second.value = value;
        it->second.version += 1;
      }
    }
  }

  // Deep, isolated copy; writes to either side are invisible to the other.
  WorldState snapshot() const { return *this; }

  const std::map<StateKey, StateEntry>& entries() const { return entries_; }

  friend bool operator==(const WorldState&, const WorldState&) = default;

 private:
  std::map<StateKey, StateEntry> entries_;
};

// Read set records the version observed for each key (nullopt when the key
// was absent); write set records the last value written. A key that is read
// and then written appears in both.
struct ReadWriteSet {
  std::map<StateKey, std::optional<std::uint64_t>> reads;
  std::map<StateKey, Value> writes;

  friend bool operator==(const ReadWriteSet&, const ReadWriteSet&) = default;
};

struct Transaction {
  std::string txid;
  Address proposer;
  Address target;  // always a contract
  std::string method;
  ValueList args;
  std::uint64_t proposed_at_step = 0;
  std::uint64_t arrival_seq = 0;
};

enum class ReceiptStatus {
  kApplied,
  kFailedException,
  kInvalidatedBlockFault,
  kInvalidatedMvccConflict,
  kRejectedAtEndorsement,
};

std::string_view receipt_status_name(ReceiptStatus status);

struct Receipt {
  std::string txid;
  ReceiptStatus status = ReceiptStatus::kApplied;
  std::string reason;  // empty for applied transactions
  std::optional<std::uint64_t> step_committed;
};

enum class BlockStatus { kCommitted, kInvalidated };

struct Block {
  std::uint64_t height = 0;
  std::uint64_t step = 0;
  BlockStatus status = BlockStatus::kCommitted;
  std::vector<Transaction> txs;
};

// Canonical serializers: stable field order, map keys sorted, decimals as
// strings with three fractional digits. Equal inputs give equal bytes.
std::string serialize_value(const Value& value);
std::string serialize_state(const WorldState& state);
std::string serialize_chain(const std::vector<Block>& chain);
std::string serialize_receipts(const std::vector<Receipt>& receipts);

}  // namespace epochsim
