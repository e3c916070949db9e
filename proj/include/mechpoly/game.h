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

#ifndef MECHPOLY_GAME_H_
#define MECHPOLY_GAME_H_

#include <span>
#include <string>
#include <vector>

#include "mechpoly/mixed_radix.h"

namespace mechpoly {

// Prior mass at or below this is treated as zero: such types generate no
// incentive constraints and no conditional expectations.
inline constexpr double kZeroMass = 1e-15;

// A finite competing-mechanism game with J principals and I agents.
//
// Type profiles x are indexed with TypeSpace() (agent 0 most significant),
// action profiles a with ActionSpace() (principal 0 most significant). Agent
// payoffs are stored per principal component, u_ik(a_k, x), since agent
// utility is additively separable across principals' actions.
struct FiniteGame {
  std::vector<std::string> principal_ids;
  std::vector<std::vector<std::string>> action_labels;  // per principal
  std::vector<std::string> agent_ids;
  std::vector<std::vector<std::string>> type_labels;  // per agent

  std::vector<double> prior;  // [x]
  // agent_payoffs[i][k][a_k * NumTypeProfiles() + x]
  std::vector<std::vector<std::vector<double>>> agent_payoffs;
  // principal_payoffs[j][a * NumTypeProfiles() + x]
  std::vector<std::vector<double>> principal_payoffs;

  int NumPrincipals() const { return static_cast<int>(action_labels.size()); }
  int NumAgents() const { return static_cast<int>(type_labels.size()); }
  int NumActions(int j) const {
    return static_cast<int>(action_labels[j].size());
  }
  int NumTypes(int i) const { return static_cast<int>(type_labels[i].size()); }

  MixedRadix TypeSpace() const;
  MixedRadix ActionSpace() const;
  int NumTypeProfiles() const { return TypeSpace().Size(); }
  int NumActionProfiles() const { return ActionSpace().Size(); }

  double AgentPayoff(int i, int k, int a_k, int x) const {
    return agent_payoffs[i][k][static_cast<size_t>(a_k) * prior.size() + x];
  }
  double PrincipalPayoff(int j, int a, int x) const {
    return principal_payoffs[j][static_cast<size_t>(a) * prior.size() + x];
  }

  // Marginal prior probability of type t of agent i.
  double TypeMass(int i, int t) const;
  bool HasPositiveMass(int i, int t) const { return TypeMass(i, t) > kZeroMass; }
};

struct ValidationResult {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

// Checks every structural invariant of the game. Violations are returned
// as data; zero-mass types are reported as warnings.
ValidationResult ValidateGame(const FiniteGame& game);

// Principal j's direct mechanism: a distribution over A_j for every type
// profile, stored row-major as probs[x * num_actions + a].
struct DirectMechanism {
  int owner = 0;
  int num_actions = 0;
  std::vector<double> probs;

  int NumProfiles() const {
    return num_actions == 0 ? 0 : static_cast<int>(probs.size()) / num_actions;
  }
  double At(int x, int a) const {
    return probs[static_cast<size_t>(x) * num_actions + a];
  }
  double& At(int x, int a) {
    return probs[static_cast<size_t>(x) * num_actions + a];
  }
  std::span<const double> Row(int x) const {
    return {probs.data() + static_cast<size_t>(x) * num_actions,
            static_cast<size_t>(num_actions)};
  }

  static DirectMechanism Constant(int owner, int num_profiles,
                                  std::span<const double> alpha);
  static DirectMechanism Degenerate(int owner, int num_profiles,
                                    int num_actions, int action);
};

bool operator==(const DirectMechanism& a, const DirectMechanism& b);

// One direct mechanism per principal, in principal order.
using MechanismProfile = std::vector<DirectMechanism>;

// Throws InputError unless `mech` has the right shape for principal `j` of
// `game` and every row is a distribution within `tol`.
void CheckDirectMechanism(const FiniteGame& game, int j,
                          const DirectMechanism& mech, double tol = 1e-9);
void CheckMechanismProfile(const FiniteGame& game,
                           const MechanismProfile& profile,
                           double tol = 1e-9);

// Index space of X_{-i}, the other agents' type profiles in agent order.
MixedRadix OthersTypeSpace(const FiniteGame& game, int i);

// Full type profile index from agent i's type and an X_{-i} index.
int ComposeTypeProfile(const FiniteGame& game, int i, int type,
                       int others_index);

// Precomputed ComposeTypeProfile / digit lookups for hot loops.
class TypeProfileTable {
 public:
  explicit TypeProfileTable(const FiniteGame& game);
  int Compose(int i, int type, int others_index) const {
    return compose_[i][static_cast<size_t>(type) * num_others_[i] +
                       others_index];
  }
  int NumOthers(int i) const { return num_others_[i]; }
  int TypeOf(int x, int i) const { return space_.Digit(x, i); }
  // Index of x's X_{-i} component.
  int OthersOf(int x, int i) const { return others_of_[i][x]; }

 private:
  MixedRadix space_;
  std::vector<int> num_others_;
  std::vector<std::vector<int>> compose_;
  std::vector<std::vector<int>> others_of_;
};

// F(x_{-i} | x_i) indexed by OthersTypeSpace(game, i). Throws
// ZeroProbabilityType when x_i has no prior mass.
std::vector<double> ConditionalPrior(const FiniteGame& game, int i, int type);

// U_ik(alpha_k, x): agent i's component payoff from principal k's random
// action alpha_k at type profile x.
double ExpectedAgentComponent(const FiniteGame& game, int i, int k,
                              std::span<const double> alpha, int x);

// Agent i's ex-ante payoff, summed over principal components.
double ExpectedAgentPayoff(const FiniteGame& game, int i,
                           const MechanismProfile& profile);

// E_x[V_j(pi_1(x), ..., pi_J(x), x)].
double ExpectedPrincipalPayoff(const FiniteGame& game, int j,
                               const MechanismProfile& profile);

// Coefficients c[x * |A_free| + a] such that principal j's expected payoff
// equals sum c * pi_free for every pi_free, the other entries of `profile`
// held fixed. The entry profile[free_principal] is ignored.
std::vector<double> LinearPayoffCoefficients(const FiniteGame& game, int j,
                                             const MechanismProfile& profile,
                                             int free_principal);

// Per type profile x, the |A_row| x |A_col| matrix B_x (row-major) with
// principal j's payoff = sum_x pi_row(x)^T B_x pi_col(x), all principals
// other than row and col held at `profile`. row != col.
std::vector<std::vector<double>> BilinearPayoffBlocks(
    const FiniteGame& game, int j, const MechanismProfile& profile,
    int row_principal, int col_principal);

struct SeparableDecomposition {
  // components[k][a_k * |X| + x]
  std::vector<std::vector<double>> components;
  double residual = 0.0;  // max-norm of joint - sum of components
};

// Splits a joint agent payoff table joint[a * |X| + x] into per-principal
// components u_k(a_k, x) with u_k(first action, x) = 0 for k >= 1. Throws
// NotSeparable when the least-squares residual exceeds `tol`.
SeparableDecomposition DecomposeSeparable(const FiniteGame& game,
                                          std::span<const double> joint,
                                          double tol = 1e-9);

}  // namespace mechpoly

#endif  // MECHPOLY_GAME_H_
