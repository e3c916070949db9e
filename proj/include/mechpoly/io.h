// Copyright 2026 The Mechpoly Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON file formats. Parse errors throw InputError naming the offending
// file position or field path (e.g. "principal_payoffs[3].v").

#ifndef MECHPOLY_IO_H_
#define MECHPOLY_IO_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "mechpoly/game.h"
#include "mechpoly/mechanisms.h"
#include "mechpoly/solver.h"

namespace mechpoly {

using Json = nlohmann::ordered_json;

// Reads and parses a JSON file; syntax errors report line and column.
Json LoadJsonFile(const std::string& path);
Json ParseJsonText(std::string_view text, const std::string& source);

// Game document:
//   principals: [{id, actions: [label]}]
//   agents: [{id, types: [label]}]
//   prior: [{profile: [type label per agent], p}]     (unlisted -> 0)
//   agent_payoffs: [{agent, principal, action, profile, u}]
//   principal_payoffs: [{principal, action_profile, profile, v}]
// Optionally agent_joint_payoffs: [{agent, action_profile, profile, u}]
// replaces agent_payoffs for the agents it lists; the joint table is split
// into per-principal components (NotSeparable if impossible).
FiniteGame ParseGame(const Json& doc);
FiniteGame LoadGame(const std::string& path);

// Full tables in declaration order; the basis of GameHash.
Json GameToJson(const FiniteGame& game);

std::uint64_t Fnv1a64(std::string_view bytes);
std::string HexDigest(std::uint64_t hash);
std::string GameHash(const FiniteGame& game);

// {owner, rows: [{profile, dist}]}, one row per type profile.
DirectMechanism ParseDirectMechanism(const FiniteGame& game, const Json& doc,
                                     const std::string& path = "");
Json DirectMechanismToJson(const FiniteGame& game, const DirectMechanism& mech);

// {mechanisms: [direct mechanism]}, one per principal in order.
MechanismProfile ParseProfile(const FiniteGame& game, const Json& doc);
Json ProfileToJson(const FiniteGame& game, const MechanismProfile& profile);

// {owner, message_sets: {principal: [label], agents: [[label]]},
//  outcome_rows: [{m: [m0, m_1, ..., m_I], dist}], standard}
GeneralMechanism ParseGeneralMechanism(const FiniteGame& game, const Json& doc,
                                       const std::string& path = "");
Json GeneralMechanismToJson(const FiniteGame& game,
                            const GeneralMechanism& mech);

std::string MechanismProfileHash(const FiniteGame& game,
                                 const std::vector<GeneralMechanism>& mechs);

// {mechanism_profile_hash, principals: [{principal, dist}],
//  agents: [{agent, principal, type, dist}]}. A principal entry may be
// omitted when its mechanism has a single principal message.
ContinuationStrategies ParseStrategies(
    const FiniteGame& game, const std::vector<GeneralMechanism>& mechs,
    const Json& doc);
Json StrategiesToJson(const FiniteGame& game,
                      const std::vector<GeneralMechanism>& mechs,
                      const ContinuationStrategies& strategies);

// {mechanisms: [general], strategies, deviations: [{principal, mechanisms}]}
EquilibriumCandidate ParseCandidate(const FiniteGame& game, const Json& doc);
Json CandidateToJson(const FiniteGame& game,
                     const EquilibriumCandidate& candidate);

Json CertificateToJson(const FiniteGame& game, const ValueCertificate& cert);

}  // namespace mechpoly

#endif  // MECHPOLY_IO_H_
