// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "epochsim/runtime.hpp"

namespace epochsim::tepc {

// Contract ids.
inline constexpr const char* kDataQualifier = "data_qualifier";
inline constexpr const char* kPredictor = "predictor";
inline constexpr const char* kAggregator = "aggregator";
inline constexpr const char* kValidator = "validator";

// Participant ids. u0..u2 are the weather stakeholders (ESCO, the weather
// service, the client), u3 is the client's consumption meter.
inline constexpr std::array<const char*, 4> kSourceIds = {"u0", "u1", "u2",
                                                          "u3"};
inline constexpr const char* kOracleId = "oracle";

Address source_address(int index);
Address oracle_address();
Address contract_address(const char* id);

// Per-channel agreement tolerances for the qualification vote.
struct VotingTolerances {
  Fixed tau = Fixed::from_millis(1'000);
  Fixed psi = Fixed::from_millis(5'000);
  Fixed rho = Fixed::from_millis(5'000);
};

struct SourceWeights {
  std::array<Fixed, 3> w = {Fixed::from_int(1), Fixed::from_int(1),
                            Fixed::from_int(1)};
};

// Daily consumption model: predicted = base_load + hdd_coefficient *
// max(0, base_temperature - mean qualified temperature).
struct PredictorModel {
  Fixed base_load = Fixed::from_int(50);
  Fixed hdd_coefficient = Fixed::from_int(10);
  Fixed base_temperature = Fixed::from_int(18);
};

struct QualifiedSample {
  SampleTriple value;
  Fixed reliability;

  friend bool operator==(const QualifiedSample&,
                         const QualifiedSample&) = default;
};

// Majority vote across up to three sources. Candidate groups are the
// subsets whose members pairwise agree on every channel both report, within
// the per-channel tolerance. The winner maximizes total weight; ties prefer
// the group containing the lowest-indexed present source, then the
// lexicographically smallest index set. The result averages each channel
// over the winners reporting it; reliability is the winners' weight sum.
// At least one input must be present.
QualifiedSample qualify_by_voting(
    const std::array<std::optional<SampleTriple>, 3>& inputs,
    const std::array<Fixed, 3>& weights, const VotingTolerances& tol);

// Clamps every channel into its physical range (tau [-30, 60] degC, psi
// [850, 1060] hPa, rho [0, 100] %). Comparing a null channel raises a
// null-value fault, checked in tau, psi, rho order.
SampleTriple clamp_sample(const SampleTriple& sample);

// State paths. Hourly stores are scoped by day so that a day's midnight
// processing and the next day's first samples never touch the same keys.
std::string pi_key(int source_index, int day, int hour);
std::string cons_key(int day);
std::string gamma_key(int hour);
std::string gamma_rel_key(int hour);
std::string sigma_daily_key(std::int64_t index);
std::string sigma_monthly_key(std::int64_t index);
inline constexpr const char* kSigmaDailyCount = "sigma_d/count";
inline constexpr const char* kSigmaMonthlyCount = "sigma_m/count";
std::string weight_key(int source_index);

struct DeploymentConfig {
  VotingTolerances voting;
  SourceWeights weights;
  PredictorModel model;
};

// Registers the four contracts at `step` and commits their configuration
// (wiring, weights, tolerances, model coefficients) as genesis state.
void deploy_tepc(ContractRegistry& registry, WorldState& state,
                 const DeploymentConfig& config, std::uint64_t step);

}  // namespace epochsim::tepc
