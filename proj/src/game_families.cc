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

#include "mechpoly/game_families.h"

#include <algorithm>
#include <string>

#include "mechpoly/random.h"

namespace mechpoly {

FiniteGame MakeZeroGame(const std::vector<int>& types_per_agent,
                        const std::vector<int>& actions_per_principal) {
  FiniteGame game;
  for (size_t j = 0; j < actions_per_principal.size(); ++j) {
    game.principal_ids.push_back(std::to_string(j + 1));
    std::vector<std::string> labels;
    for (int a = 0; a < actions_per_principal[j]; ++a) {
      labels.push_back(std::to_string(a));
    }
    game.action_labels.push_back(std::move(labels));
  }
  for (size_t i = 0; i < types_per_agent.size(); ++i) {
    game.agent_ids.push_back(std::to_string(i + 1));
    std::vector<std::string> labels;
    for (int t = 0; t < types_per_agent[i]; ++t) {
      labels.push_back(std::to_string(t));
    }
    game.type_labels.push_back(std::move(labels));
  }
  const int num_profiles = game.NumTypeProfiles();
  game.prior.assign(num_profiles, 1.0 / num_profiles);
  game.agent_payoffs.resize(game.NumAgents());
  for (auto& per_agent : game.agent_payoffs) {
    per_agent.resize(game.NumPrincipals());
    for (int k = 0; k < game.NumPrincipals(); ++k) {
      per_agent[k].assign(
          static_cast<size_t>(game.NumActions(k)) * num_profiles, 0.0);
    }
  }
  game.principal_payoffs.assign(
      game.NumPrincipals(),
      std::vector<double>(
          static_cast<size_t>(game.NumActionProfiles()) * num_profiles, 0.0));
  return game;
}

FiniteGame MakeMatchingPennies() {
  FiniteGame game = MakeZeroGame({1, 1, 1}, {2, 2});
  game.action_labels = {{"H", "T"}, {"H", "T"}};
  const MixedRadix actions = game.ActionSpace();
  for (int a = 0; a < actions.Size(); ++a) {
    const double match = actions.Digit(a, 0) == actions.Digit(a, 1) ? 1.0 : 0.0;
    game.principal_payoffs[0][a] = match;
    game.principal_payoffs[1][a] = 1.0 - match;
  }
  return game;
}

FiniteGame MakeScreening() {
  FiniteGame game = MakeZeroGame({2}, {2, 1});
  game.type_labels = {{"L", "H"}};
  game.action_labels = {{"a", "b"}, {"c"}};
  // u_11(a, L) = 1, u_11(b, H) = 1, zero otherwise.
  auto& u = game.agent_payoffs[0][0];
  const int num_profiles = game.NumTypeProfiles();
  u[0 * num_profiles + 0] = 1.0;
  u[1 * num_profiles + 1] = 1.0;
  return game;
}

FiniteGame MakeGap3Instance(std::uint64_t seed) {
  Rng rng(seed);
  FiniteGame game = MakeZeroGame({1, 1, 1}, {2, 2, 2});
  const MixedRadix actions = game.ActionSpace();
  const double noise = rng.Uniform(0.0, 0.5);
  for (int a = 0; a < actions.Size(); ++a) {
    const int a1 = actions.Digit(a, 0);
    const int a2 = actions.Digit(a, 1);
    const int a3 = actions.Digit(a, 2);
    double pattern = 1.0;
    if (a2 != a3) pattern = a1 == a2 ? 1.0 : 0.0;
    game.principal_payoffs[0][a] =
        (1.0 - noise) * pattern + noise * rng.Uniform();
  }
  for (int j = 1; j < 3; ++j) {
    for (int a = 0; a < actions.Size(); ++a) {
      game.principal_payoffs[j][a] = rng.Uniform();
    }
  }
  return game;
}

FiniteGame MakeRandomGame(const RandomGameSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> types(spec.num_agents);
  std::vector<int> actions(spec.num_principals);
  for (int attempt = 0;; ++attempt) {
    for (int& t : types) t = 1 + rng.Below(spec.max_types);
    for (int& a : actions) {
      a = spec.min_actions + rng.Below(spec.max_actions - spec.min_actions + 1);
    }
    if (spec.max_variables <= 0) break;
    int profiles = 1;
    for (int t : types) profiles *= t;
    const int widest = *std::max_element(actions.begin(), actions.end());
    if (profiles * widest <= spec.max_variables) break;
    if (attempt > 1000) {
      std::fill(types.begin(), types.end(), 1);
      break;
    }
  }
  FiniteGame game = MakeZeroGame(types, actions);
  const int num_profiles = game.NumTypeProfiles();

  if (spec.correlated_prior) {
    game.prior = rng.Simplex(num_profiles);
  } else {
    const MixedRadix space = game.TypeSpace();
    std::vector<std::vector<double>> marginals;
    for (int i = 0; i < game.NumAgents(); ++i) {
      marginals.push_back(rng.Simplex(game.NumTypes(i)));
    }
    for (int x = 0; x < num_profiles; ++x) {
      double p = 1.0;
      for (int i = 0; i < game.NumAgents(); ++i) {
        p *= marginals[i][space.Digit(x, i)];
      }
      game.prior[x] = p;
    }
  }
  if (spec.zero_mass_probability > 0.0 && num_profiles > 1) {
    double mass = 0.0;
    for (double& p : game.prior) {
      if (rng.Uniform() < spec.zero_mass_probability) p = 0.0;
      mass += p;
    }
    if (mass <= 0.0) {
      game.prior.assign(num_profiles, 0.0);
      game.prior[0] = 1.0;
    } else {
      for (double& p : game.prior) p /= mass;
    }
  }

  for (auto& per_agent : game.agent_payoffs) {
    for (auto& table : per_agent) {
      for (double& u : table) u = rng.Uniform(-1.0, 1.0);
    }
  }
  for (auto& table : game.principal_payoffs) {
    for (double& v : table) {
      v = rng.Uniform(spec.principal_payoff_lo, spec.principal_payoff_hi);
    }
  }
  return game;
}

}  // namespace mechpoly
