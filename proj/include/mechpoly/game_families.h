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

#ifndef MECHPOLY_GAME_FAMILIES_H_
#define MECHPOLY_GAME_FAMILIES_H_

#include <cstdint>

#include "mechpoly/game.h"

namespace mechpoly {

// Empty game skeleton with integer-named players ("1", "2", ...), the given
// type and action counts, a uniform prior and all payoffs zero.
FiniteGame MakeZeroGame(const std::vector<int>& types_per_agent,
                        const std::vector<int>& actions_per_principal);

// Matching pennies between two principals with three uninformed agents:
// principal 1 gets 1 when the actions match, principal 2 when they differ.
FiniteGame MakeMatchingPennies();

// One agent with equiprobable types {L, H}; principal 1 chooses {a, b} and
// the agent wants a when L and b when H. Principal 2 has a single action.
FiniteGame MakeScreening();

// Three principals, three uninformed agents, binary actions. Principal 1's
// payoff blends a coordination pattern (1 when principals 2 and 3 match,
// matching pennies against principal 2 otherwise) with random noise;
// principals 2 and 3 have random payoffs.
FiniteGame MakeGap3Instance(std::uint64_t seed);

struct RandomGameSpec {
  int num_principals = 2;
  int num_agents = 1;
  int max_types = 2;    // per agent, drawn from [1, max_types]
  int min_actions = 2;  // per principal
  int max_actions = 3;
  bool correlated_prior = true;
  double zero_mass_probability = 0.0;  // chance each profile gets no mass
  double principal_payoff_lo = 0.0;
  double principal_payoff_hi = 1.0;
  // Caps |X| * |A_j| so vertex enumeration stays feasible; <= 0 disables.
  int max_variables = 0;
};

// Random separable game; deterministic given `seed`.
FiniteGame MakeRandomGame(const RandomGameSpec& spec, std::uint64_t seed);

}  // namespace mechpoly

#endif  // MECHPOLY_GAME_FAMILIES_H_
