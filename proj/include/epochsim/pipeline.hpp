// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <variant>
#include <vector>

#include "epochsim/runtime.hpp"

namespace epochsim {

enum class Architecture { kOrderExecute, kExecuteOrderValidate };

struct ArchitectureConfig {
  Architecture kind = Architecture::kOrderExecute;
  // Order-execute: when true (the reference behaviour), blocks are formed
  // without pre-executing, so a faulty transaction invalidates its whole
  // block. When false, the proposer pre-executes and drops faulty
  // transactions before sealing the block.
  bool oe_skip_preexecution = true;
  int eov_endorser_count = 2;
  int block_frequency_steps = 1;
  // Run the endorsers of one transaction concurrently. Results are
  // identical to the serial path; only wall time changes.
  bool parallel_endorsement = false;
};

// Pending transactions in arrival order. arrival_seq is assigned here and
// is unique across the run.
class Mempool {
 public:
  const Transaction& admit(Transaction tx) {
    tx.arrival_seq = next_seq_++;
    tx.txid = format_txid(tx.arrival_seq);
    pending_.push_back(std::move(tx));
    return pending_.back();
  }

  // Removes and returns every transaction proposed at or before `step`.
  std::vector<Transaction> drain_due(std::uint64_t step);

  bool has_due(std::uint64_t step) const {
    return !pending_.empty() && pending_.front().proposed_at_step <= step;
  }

  std::size_t size() const { return pending_.size(); }

  static std::string format_txid(std::uint64_t seq);

 private:
  std::deque<Transaction> pending_;
  std::uint64_t next_seq_ = 0;
};

// Block ordering: time oracle first, then the weather stakeholders, then
// the consumption meter; arrival order breaks ties.
int proposer_priority(const Address& proposer);
std::vector<Transaction> canonical_order(std::vector<Transaction> txs);

struct Ledger {
  WorldState state;
  std::vector<Block> chain;
};

struct Endorsement {
  ReadWriteSet rwset;
  Value ret;
  int endorser_count = 0;
};

// Simulates the transaction on `endorser_count` isolated views of the
// committed state and checks that all endorsers produced the same result
// (execution is deterministic, so a mismatch is an internal error). A
// contract fault rejects the transaction before ordering.
std::variant<Endorsement, ContractFault> eov_endorse(
    const Transaction& tx, const WorldState& committed,
    const ContractRegistry& registry, const ArchitectureConfig& config,
    std::uint64_t step);

// One order-execute block: drain, order canonically, execute sequentially.
// Any contract fault invalidates the entire block and no write survives.
// Returns one receipt per drained transaction; empty when nothing is due.
std::vector<Receipt> oe_step(Ledger& ledger, Mempool& mempool,
                             const ContractRegistry& registry,
                             const ArchitectureConfig& config,
                             std::uint64_t step);

// One execute-order-validate block: endorse against the state at block
// start, order, then validate read versions (and same-block write-write
// collisions) before committing each transaction.
std::vector<Receipt> eov_step(Ledger& ledger, Mempool& mempool,
                              const ContractRegistry& registry,
                              const ArchitectureConfig& config,
                              std::uint64_t step);

inline std::vector<Receipt> arch_step(Ledger& ledger, Mempool& mempool,
                                      const ContractRegistry& registry,
                                      const ArchitectureConfig& config,
                                      std::uint64_t step) {
  return config.kind == Architecture::kOrderExecute
             ? oe_step(ledger, mempool, registry, config, step)
             : eov_step(ledger, mempool, registry, config, step);
}

}  // namespace epochsim
