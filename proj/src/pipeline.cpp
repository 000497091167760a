// SPDX-License-Identifier: Apache-2.0
#include "epochsim/pipeline.hpp"

#include <algorithm>
#include <set>

namespace epochsim {

std::vector<Transaction> Mempool::drain_due(std::uint64_t step) {
  std::vector<Transaction> due;
  while (!pending_.empty() && pending_.front().proposed_at_step <= step) {
    due.push_back(std::move(pending_.front()));
    pending_.pop_front();
  }
  return due;
}

std::string Mempool::format_txid(std::uint64_t seq) {
  std::string digits = std::to_string(seq);
  while (digits.size() < 6) digits.insert(digits.begin(), '0');
  return "tx-" + digits;
}

int proposer_priority(const Address& proposer) {
  if (proposer.kind == AddressKind::kOracle) return 0;
  if (proposer.kind == AddressKind::kSource && proposer.id == "u3") return 2;
  return 1;
}

std::vector<Transaction> canonical_order(std::vector<Transaction> txs) {
  std::stable_sort(txs.begin(), txs.end(),
                   [](const Transaction& a, const Transaction& b) {
                     int pa = proposer_priority(a.proposer);
                     int pb = proposer_priority(b.proposer);
                     if (pa != pb) return pa < pb;
                     return a.arrival_seq < b.arrival_seq;
                   });
  return txs;
}

std::variant<Endorsement, ContractFault> eov_endorse(
    const Transaction& tx, const WorldState& committed,
    const ContractRegistry& registry, const ArchitectureConfig& config,
    std::uint64_t step) {
  const int n = config.eov_endorser_count;
  std::vector<ExecResult> results(static_cast<std::size_t>(n));
  // The committed state is immutable while endorsing, so each endorser's
  // const view is an isolated snapshot.
  if (config.parallel_endorsement) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      results[static_cast<std::size_t>(i)] =
          execute(registry, committed, tx, step);
  } else {
    for (int i = 0; i < n; ++i)
      results[static_cast<std::size_t>(i)] =
          execute(registry, committed, tx, step);
  }
  for (int i = 1; i < n; ++i) {
    const ExecResult& a = results[0];
    const ExecResult& b = results[static_cast<std::size_t>(i)];
    bool same = a.ok() == b.ok();
    if (same && a.ok())
      same = a.outcome->rwset == b.outcome->rwset && a.outcome->ret == b.outcome->ret;
    if (same && !a.ok())
      same = a.fault->kind == b.fault->kind && a.fault->message == b.fault->message;
    if (!same)
      throw InternalError{"endorsers disagree on transaction " + tx.txid};
  }
  if (!results[0].ok()) return *results[0].fault;
  return Endorsement{std::move(results[0].outcome->rwset),
                     std::move(results[0].outcome->ret), n};
}

namespace {

Receipt make_receipt(const Transaction& tx, ReceiptStatus status,
                     std::string reason = {},
                     std::optional<std::uint64_t> step_committed = {}) {
  return Receipt{tx.txid, status, std::move(reason), step_committed};
}

}  // namespace

std::vector<Receipt> oe_step(Ledger& ledger, Mempool& mempool,
                             const ContractRegistry& registry,
                             const ArchitectureConfig& config,
                             std::uint64_t step) {
  std::vector<Transaction> txs = canonical_order(mempool.drain_due(step));
  if (txs.empty()) return {};

  std::vector<Receipt> receipts;
  if (!config.oe_skip_preexecution) {
    // Validated variant: the proposer simulates the block and drops faulty
    // transactions before sealing it.
    WorldState scratch = ledger.state.snapshot();
    std::vector<Transaction> sealed;
    for (Transaction& tx : txs) {
      ExecResult r = execute(registry, scratch, tx, step);
      if (r.ok()) {
        scratch.apply(r.outcome->rwset.writes);
        sealed.push_back(std::move(tx));
      } else {
        receipts.push_back(make_receipt(tx, ReceiptStatus::kFailedException,
                                        r.fault->describe()));
      }
    }
    txs = std::move(sealed);
  }

  // Execute sequentially on a working copy; the committed state is only
  // replaced when the whole block succeeds.
  WorldState working = ledger.state.snapshot();
  std::optional<std::pair<std::string, std::string>> fault;  // txid, reason
  for (const Transaction& tx : txs) {
    ExecResult r = execute(registry, working, tx, step);
    if (!r.ok()) {
      fault = {tx.txid, r.fault->describe()};
      break;
    }
    working.apply(r.outcome->rwset.writes);
  }

  Block block;
  block.height = ledger.chain.size();
  block.step = step;
  block.txs = txs;
  if (fault) {
    block.status = BlockStatus::kInvalidated;
    for (const Transaction& tx : txs) {
      std::string reason = tx.txid == fault->first
                               ? fault->second
                               : "block invalidated by " + fault->first;
      receipts.push_back(make_receipt(tx, ReceiptStatus::kInvalidatedBlockFault,
                                      std::move(reason)));
    }
  } else {
    ledger.state = std::move(working);
    block.status = BlockStatus::kCommitted;
    for (const Transaction& tx : txs)
      receipts.push_back(make_receipt(tx, ReceiptStatus::kApplied, {}, step));
  }
  ledger.chain.push_back(std::move(block));
  return receipts;
}

std::vector<Receipt> eov_step(Ledger& ledger, Mempool& mempool,
                              const ContractRegistry& registry,
                              const ArchitectureConfig& config,
                              std::uint64_t step) {
  std::vector<Transaction> txs = canonical_order(mempool.drain_due(step));
  if (txs.empty()) return {};

  struct Ordered {
    Transaction tx;
    Endorsement endorsement;
  };
  std::vector<Receipt> receipts;
  std::vector<Ordered> ordered;
  // Phase 1+2: endorse everything against the state as of block start.
  for (Transaction& tx : txs) {
    auto result = eov_endorse(tx, ledger.state, registry, config, step);
    if (std::holds_alternative<ContractFault>(result)) {
      receipts.push_back(
          make_receipt(tx, ReceiptStatus::kRejectedAtEndorsement,
                       std::get<ContractFault>(result).describe()));
    } else {
      ordered.push_back(
          {std::move(tx), std::move(std::get<Endorsement>(result))});
    }
  }

  // Phase 3: validate in canonical order, committing as we go.
  Block block;
  block.height = ledger.chain.size();
  block.step = step;
  block.status = BlockStatus::kCommitted;
  std::set<StateKey> written_in_block;
  for (Ordered& item : ordered) {
    std::string conflict;
    for (const auto& [key, version_read] : item.endorsement.rwset.reads) {
      const StateEntry* entry = ledger.state.find(key);
      std::optional<std::uint64_t> current =
          entry ? std::optional<std::uint64_t>(entry->version) : std::nullopt;
      if (current != version_read) {
        conflict = "stale read of " + key.contract + ":" + key.key;
        break;
      }
    }
    if (conflict.empty()) {
      for (const auto& [key, value] : item.endorsement.rwset.writes) {
        if (written_in_block.contains(key)) {
          conflict = "write conflict on " + key.contract + ":" + key.key;
          break;
        }
      }
    }
    if (!conflict.empty()) {
      receipts.push_back(make_receipt(
          item.tx, ReceiptStatus::kInvalidatedMvccConflict, conflict));
      continue;
    }
    ledger.state.apply(item.endorsement.rwset.writes);
    for (const auto& [key, value] : item.endorsement.rwset.writes)
      written_in_block.insert(key);
    receipts.push_back(make_receipt(item.tx, ReceiptStatus::kApplied, {}, step));
    block.txs.push_back(std::move(item.tx));
  }
  ledger.chain.push_back(std::move(block));
  return receipts;
}

}  // namespace epochsim
