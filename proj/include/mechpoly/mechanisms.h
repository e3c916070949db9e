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

#ifndef MECHPOLY_MECHANISMS_H_
#define MECHPOLY_MECHANISMS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mechpoly/game.h"
#include "mechpoly/mixed_radix.h"

namespace mechpoly {

// Finite-message mechanism gamma: M_0 x M_1 x ... x M_I -> Delta(A).
// Agent message profiles are indexed by MixedRadix over agents (agent 0 most
// significant).
struct GeneralMechanism {
  int owner = 0;
  int num_actions = 0;
  std::vector<std::string> principal_messages;               // M_0
  std::vector<std::vector<std::string>> agent_messages;      // M_i
  // outcome[((m0 * NumMessageProfiles()) + m) * num_actions + a]
  std::vector<double> outcome;
  bool standard = false;

  int NumPrincipalMessages() const {
    return static_cast<int>(principal_messages.size());
  }
  int NumAgentMessages(int i) const {
    return static_cast<int>(agent_messages[i].size());
  }
  MixedRadix MessageSpace() const;
  int NumMessageProfiles() const { return MessageSpace().Size(); }
  std::span<const double> Outcome(int m0, int m) const {
    return {outcome.data() +
                (static_cast<size_t>(m0) * NumMessageProfiles() + m) *
                    num_actions,
            static_cast<size_t>(num_actions)};
  }
  // True when no outcome row depends on m_0.
  bool OutcomeIgnoresPrincipalMessage(double tol = 1e-12) const;
};

bool operator==(const GeneralMechanism& a, const GeneralMechanism& b);

// Throws InputError on dimension mismatches, invalid rows, or a standard
// flag that contradicts the outcome table.
void CheckGeneralMechanism(const FiniteGame& game, const GeneralMechanism& mech,
                           double tol = 1e-12);

// The standard mechanism whose agents report types: M_0 singleton,
// M_i = X_i, outcome = pi(reported profile).
GeneralMechanism StandardDirectMechanism(const FiniteGame& game,
                                         const DirectMechanism& pi);

// Mixed continuation strategies for one mechanism profile.
struct ContinuationStrategies {
  std::vector<std::vector<double>> principal;  // [k][m0]
  // agent[i][k][x_i][m]
  std::vector<std::vector<std::vector<std::vector<double>>>> agent;
};

struct PureContinuation {
  std::vector<int> principal;                      // [k]
  std::vector<std::vector<std::vector<int>>> agent;  // [i][k][x_i]

  friend bool operator==(const PureContinuation&,
                         const PureContinuation&) = default;
};

ContinuationStrategies ToMixed(const FiniteGame& game,
                               const std::vector<GeneralMechanism>& mechanisms,
                               const PureContinuation& pure);

void CheckStrategies(const FiniteGame& game,
                     const std::vector<GeneralMechanism>& mechanisms,
                     const ContinuationStrategies& strategies,
                     double tol = 1e-9);

// Mixture over messages of gamma_k's outcome rows, indexed by type profile.
DirectMechanism InduceDirectMechanism(const FiniteGame& game,
                                      const GeneralMechanism& mech,
                                      const ContinuationStrategies& strategies);

MechanismProfile InduceProfile(const FiniteGame& game,
                               const std::vector<GeneralMechanism>& mechanisms,
                               const ContinuationStrategies& strategies);

// Szentes-style contract: each agent message profile maps to a nonempty
// finite set of distributions over A.
struct SetValuedContract {
  int owner = 0;
  int num_actions = 0;
  std::vector<std::vector<std::string>> agent_messages;
  // sets[m] = list of distributions
  std::vector<std::vector<std::vector<double>>> sets;

  MixedRadix MessageSpace() const;
};

void CheckSetValuedContract(const SetValuedContract& h, double tol = 1e-12);

struct NestedContract {
  GeneralMechanism mechanism;
  // Distinct image sets of h in order of first appearance; M_0 enumerates
  // one member choice per image set (MixedRadix over image sets).
  std::vector<std::vector<std::vector<double>>> image_sets;
  std::vector<int> image_of;  // [m] -> index into image_sets
  // M_0 index of the caller's selection, when one was given.
  std::optional<int> selected_message;
};

inline constexpr double kMaxSelections = 1e6;

// selection[s] picks a member of image_sets[s]; may be empty.
NestedContract NestSzentesContract(const SetValuedContract& h,
                                   const std::vector<int>& selection = {});

// M_0 = menu entries, M_i = X_i, outcome(pi, x') = pi(x').
GeneralMechanism BuildTypeAndDmMechanism(
    const FiniteGame& game, int j, const std::vector<DirectMechanism>& menu,
    double tol = 1e-9);

// Branch taken by principal k's deviator-reporting mechanism when agent i
// names principal named[i]: the unique j != k named by more than half of
// the agents, otherwise k.
int DeviatorBranch(int k, std::span<const int> named);

// M_ik = {principals} x X_i with index l * |X_i| + x_i; plays
// punishments[j] (entry k unused) on a strict majority naming j != k,
// otherwise pi_star.
GeneralMechanism BuildDeviatorReporting(
    const FiniteGame& game, int k, const DirectMechanism& pi_star,
    const std::vector<DirectMechanism>& punishments, double tol = 1e-9);

enum class DeviationKind { kNone, kAgent, kPrincipal };

struct Deviation {
  DeviationKind kind = DeviationKind::kNone;
  int player = -1;     // agent or principal index
  int principal = -1;  // mechanism the deviation is sent to
  int type = -1;       // agent type, for agent deviations
  int message = -1;    // alternative pure message
  double gain = 0.0;
};

struct ContinuationVerdict {
  bool ok = true;
  Deviation worst;
};

ContinuationVerdict CheckContinuationEquilibrium(
    const FiniteGame& game, const std::vector<GeneralMechanism>& mechanisms,
    const ContinuationStrategies& strategies, double tol = 1e-9);

inline constexpr double kMaxContinuationCandidates = 2e7;

// All pure continuation equilibria, in lexicographic order of
// (principal messages, agent messages per principal).
std::vector<PureContinuation> EnumeratePureContinuationEquilibria(
    const FiniteGame& game, const std::vector<GeneralMechanism>& mechanisms,
    double tol = 1e-9);

// Distinct direct mechanisms of the principals other than j that arise in
// pure continuation equilibria of their own mechanisms' message games
// (these do not depend on j's mechanism when the others' mechanisms are
// standard). Each entry is a full profile with entry j left uniform.
std::vector<MechanismProfile> RealizedOtherProfiles(
    const FiniteGame& game, const std::vector<GeneralMechanism>& mechanisms,
    int j, double tol = 1e-9);

enum class EquilibriumNotion { kPbe, kRobust, kStronglyRobust };

std::string ToString(EquilibriumNotion notion);
std::optional<EquilibriumNotion> ParseEquilibriumNotion(const std::string& s);

struct EquilibriumCandidate {
  std::vector<GeneralMechanism> mechanisms;        // gamma*
  ContinuationStrategies on_path;                  // play after gamma*
  std::vector<std::vector<GeneralMechanism>> deviations;  // D_j
};

enum class NotionStatus { kTrue, kFalse, kInfeasibleCheck };

std::string ToString(NotionStatus status);

struct DeviationOutcome {
  int principal = 0;
  int index = 0;              // position in D_j
  bool identical = false;     // same as gamma*_j, skipped
  int num_equilibria = 0;
  double value = 0.0;         // deviation value under the notion
  bool profitable = false;
};

struct NotionVerdict {
  NotionStatus status = NotionStatus::kTrue;
  EquilibriumNotion notion = EquilibriumNotion::kRobust;
  ContinuationVerdict on_path;
  std::vector<double> equilibrium_payoffs;  // per principal
  std::vector<DeviationOutcome> deviations;
  // Worst (largest gain) deviation, when any deviation was evaluated.
  std::optional<DeviationOutcome> worst;
};

NotionVerdict CheckEquilibriumNotion(const FiniteGame& game,
                                     const EquilibriumCandidate& candidate,
                                     EquilibriumNotion notion,
                                     double tol = 1e-6);

// Deviator-reporting mechanisms implementing `target`, with punishments[j]
// holding the profile that punishes principal j (entry j unused), and the
// on-path strategies where agents name the mechanism's owner and report
// truthfully. Deviation sets are left empty.
EquilibriumCandidate BuildRobustSupport(
    const FiniteGame& game, const MechanismProfile& target,
    const std::vector<MechanismProfile>& punishments);

// Type-and-DM mechanism for principal j whose menu holds a best response
// to every profile in `others`.
GeneralMechanism BuildBestResponseMenu(
    const FiniteGame& game, int j, const std::vector<MechanismProfile>& others);

// Random finite mechanism for principal j with up to `max_messages`
// messages per player; deterministic given seed.
GeneralMechanism RandomGeneralMechanism(const FiniteGame& game, int j,
                                        int max_messages, std::uint64_t seed);

struct SimulationReport {
  std::uint64_t seed = 0;
  int rounds = 0;
  std::vector<double> principal_mean, principal_stderr, principal_analytic;
  std::vector<double> agent_mean, agent_stderr, agent_analytic;
  // action_frequency[k][a]
  std::vector<std::vector<double>> action_frequency;
};

SimulationReport Simulate(const FiniteGame& game,
                          const std::vector<GeneralMechanism>& mechanisms,
                          const ContinuationStrategies& strategies,
                          std::uint64_t seed, int rounds);

}  // namespace mechpoly

#endif  // MECHPOLY_MECHANISMS_H_
