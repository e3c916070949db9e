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

#include "mechpoly/game.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mechpoly/errors.h"

namespace mechpoly {
namespace {

std::string FormatDouble(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

}  // namespace

MixedRadix FiniteGame::TypeSpace() const {
  std::vector<int> radices;
  radices.reserve(type_labels.size());
  for (const auto& labels : type_labels) {
    radices.push_back(static_cast<int>(labels.size()));
  }
  return MixedRadix(std::move(radices));
}

MixedRadix FiniteGame::ActionSpace() const {
  std::vector<int> radices;
  radices.reserve(action_labels.size());
  for (const auto& labels : action_labels) {
    radices.push_back(static_cast<int>(labels.size()));
  }
  return MixedRadix(std::move(radices));
}

double FiniteGame::TypeMass(int i, int t) const {
  const MixedRadix space = TypeSpace();
  double mass = 0.0;
  for (int x = 0; x < space.Size(); ++x) {
    if (space.Digit(x, i) == t) mass += prior[x];
  }
  return mass;
}

ValidationResult ValidateGame(const FiniteGame& game) {
  ValidationResult result;
  auto& v = result.violations;
  const int num_principals = game.NumPrincipals();
  const int num_agents = game.NumAgents();

  if (num_principals < 2) v.push_back("J >= 2 required");
  if (num_agents < 1) v.push_back("I >= 1 required");
  if (game.principal_ids.size() != game.action_labels.size()) {
    v.push_back("principals: id count does not match action sets");
  }
  if (game.agent_ids.size() != game.type_labels.size()) {
    v.push_back("agents: id count does not match type sets");
  }
  bool shapes_ok = true;
  for (int j = 0; j < num_principals; ++j) {
    if (game.action_labels[j].empty()) {
      v.push_back("principals[" + std::to_string(j) + "]: empty action set");
      shapes_ok = false;
    }
  }
  for (int i = 0; i < num_agents; ++i) {
    if (game.type_labels[i].empty()) {
      v.push_back("agents[" + std::to_string(i) + "]: empty type set");
      shapes_ok = false;
    }
  }
  if (!shapes_ok) return result;

  const int num_profiles = game.NumTypeProfiles();
  if (static_cast<int>(game.prior.size()) != num_profiles) {
    v.push_back("prior: expected " + std::to_string(num_profiles) +
                " entries, found " + std::to_string(game.prior.size()));
  } else {
    double mass = 0.0;
    for (int x = 0; x < num_profiles; ++x) {
      const double p = game.prior[x];
      if (!std::isfinite(p) || p < 0.0) {
        v.push_back("prior[" + std::to_string(x) + "]: negative or non-finite "
                    "probability " + FormatDouble(p));
      }
      mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-12) {
      v.push_back("prior mass " + FormatDouble(mass) + " != 1");
    }
  }

  if (static_cast<int>(game.agent_payoffs.size()) != num_agents) {
    v.push_back("agent_payoffs: expected one table per agent");
  } else {
    for (int i = 0; i < num_agents; ++i) {
      if (static_cast<int>(game.agent_payoffs[i].size()) != num_principals) {
        v.push_back("agent_payoffs[" + std::to_string(i) +
                    "]: expected one component per principal");
        continue;
      }
      for (int k = 0; k < num_principals; ++k) {
        const auto& table = game.agent_payoffs[i][k];
        const size_t expected =
            static_cast<size_t>(game.NumActions(k)) * num_profiles;
        if (table.size() != expected) {
          v.push_back("agent_payoffs[" + std::to_string(i) + "][" +
                      std::to_string(k) + "]: table not fully populated");
          continue;
        }
        for (size_t e = 0; e < table.size(); ++e) {
          if (!std::isfinite(table[e])) {
            v.push_back("agent_payoffs[" + std::to_string(i) + "][" +
                        std::to_string(k) + "]: non-finite entry " +
                        std::to_string(e));
            break;
          }
        }
      }
    }
  }

  if (static_cast<int>(game.principal_payoffs.size()) != num_principals) {
    v.push_back("principal_payoffs: expected one table per principal");
  } else {
    const size_t expected =
        static_cast<size_t>(game.NumActionProfiles()) * num_profiles;
    for (int j = 0; j < num_principals; ++j) {
      const auto& table = game.principal_payoffs[j];
      if (table.size() != expected) {
        v.push_back("principal_payoffs[" + std::to_string(j) +
                    "]: table not fully populated");
        continue;
      }
      for (size_t e = 0; e < table.size(); ++e) {
        if (!std::isfinite(table[e])) {
          v.push_back("principal_payoffs[" + std::to_string(j) +
                      "]: non-finite entry " + std::to_string(e));
          break;
        }
      }
    }
  }

  if (result.ok()) {
    for (int i = 0; i < num_agents; ++i) {
      for (int t = 0; t < game.NumTypes(i); ++t) {
        if (!game.HasPositiveMass(i, t)) {
          result.warnings.push_back("agent " + game.agent_ids[i] + " type " +
                                    game.type_labels[i][t] +
                                    " has zero prior mass");
        }
      }
    }
  }
  return result;
}

DirectMechanism DirectMechanism::Constant(int owner, int num_profiles,
                                          std::span<const double> alpha) {
  DirectMechanism mech;
  mech.owner = owner;
  mech.num_actions = static_cast<int>(alpha.size());
  mech.probs.reserve(static_cast<size_t>(num_profiles) * alpha.size());
  for (int x = 0; x < num_profiles; ++x) {
    mech.probs.insert(mech.probs.end(), alpha.begin(), alpha.end());
  }
  return mech;
}

DirectMechanism DirectMechanism::Degenerate(int owner, int num_profiles,
                                            int num_actions, int action) {
  std::vector<double> alpha(num_actions, 0.0);
  alpha[action] = 1.0;
  return Constant(owner, num_profiles, alpha);
}

bool operator==(const DirectMechanism& a, const DirectMechanism& b) {
  return a.owner == b.owner && a.num_actions == b.num_actions &&
         a.probs == b.probs;
}

void CheckDirectMechanism(const FiniteGame& game, int j,
                          const DirectMechanism& mech, double tol) {
  const std::string where = "mechanism of principal " + std::to_string(j + 1);
  if (mech.num_actions != game.NumActions(j)) {
    throw InputError(where + ": expected " +
                     std::to_string(game.NumActions(j)) + " actions");
  }
  const int num_profiles = game.NumTypeProfiles();
  if (mech.probs.size() !=
      static_cast<size_t>(num_profiles) * mech.num_actions) {
    throw InputError(where + ": expected one row per type profile");
  }
  for (int x = 0; x < num_profiles; ++x) {
    double sum = 0.0;
    for (double p : mech.Row(x)) {
      if (!std::isfinite(p) || p < -tol) {
        throw InputError(where + ": negative probability in row " +
                         std::to_string(x));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw InputError(where + ": row " + std::to_string(x) +
                       " sums to " + FormatDouble(sum));
    }
  }
}

void CheckMechanismProfile(const FiniteGame& game,
                           const MechanismProfile& profile, double tol) {
  if (static_cast<int>(profile.size()) != game.NumPrincipals()) {
    throw InputError("mechanism profile needs one mechanism per principal");
  }
  for (int j = 0; j < game.NumPrincipals(); ++j) {
    CheckDirectMechanism(game, j, profile[j], tol);
  }
}

MixedRadix OthersTypeSpace(const FiniteGame& game, int i) {
  std::vector<int> radices;
  for (int l = 0; l < game.NumAgents(); ++l) {
    if (l != i) radices.push_back(game.NumTypes(l));
  }
  return MixedRadix(std::move(radices));
}

int ComposeTypeProfile(const FiniteGame& game, int i, int type,
                       int others_index) {
  const MixedRadix others = OthersTypeSpace(game, i);
  std::vector<int> digits;
  digits.reserve(game.NumAgents());
  int pos = 0;
  for (int l = 0; l < game.NumAgents(); ++l) {
    digits.push_back(l == i ? type : others.Digit(others_index, pos++));
  }
  return game.TypeSpace().Encode(digits);
}

TypeProfileTable::TypeProfileTable(const FiniteGame& game)
    : space_(game.TypeSpace()) {
  const int num_agents = game.NumAgents();
  num_others_.resize(num_agents);
  compose_.resize(num_agents);
  others_of_.resize(num_agents);
  for (int i = 0; i < num_agents; ++i) {
    const MixedRadix others = OthersTypeSpace(game, i);
    num_others_[i] = others.Size();
    compose_[i].resize(static_cast<size_t>(game.NumTypes(i)) * others.Size());
    others_of_[i].resize(space_.Size());
    for (int t = 0; t < game.NumTypes(i); ++t) {
      for (int o = 0; o < others.Size(); ++o) {
        const int x = ComposeTypeProfile(game, i, t, o);
        compose_[i][static_cast<size_t>(t) * others.Size() + o] = x;
        others_of_[i][x] = o;
      }
    }
  }
}

std::vector<double> ConditionalPrior(const FiniteGame& game, int i, int type) {
  if (i < 0 || i >= game.NumAgents() || type < 0 || type >= game.NumTypes(i)) {
    throw InputError("agent/type index out of range");
  }
  const MixedRadix others = OthersTypeSpace(game, i);
  std::vector<double> cond(others.Size());
  double mass = 0.0;
  for (int o = 0; o < others.Size(); ++o) {
    cond[o] = game.prior[ComposeTypeProfile(game, i, type, o)];
    mass += cond[o];
  }
  if (mass <= kZeroMass) throw ZeroProbabilityType(i, type);
  for (double& c : cond) c /= mass;
  return cond;
}

double ExpectedAgentComponent(const FiniteGame& game, int i, int k,
                              std::span<const double> alpha, int x) {
  if (i < 0 || i >= game.NumAgents() || k < 0 || k >= game.NumPrincipals() ||
      x < 0 || x >= game.NumTypeProfiles()) {
    throw InputError("index out of range in ExpectedAgentComponent");
  }
  if (static_cast<int>(alpha.size()) != game.NumActions(k)) {
    throw InputError("distribution size does not match action set");
  }
  double value = 0.0;
  for (int a = 0; a < game.NumActions(k); ++a) {
    value += alpha[a] * game.AgentPayoff(i, k, a, x);
  }
  return value;
}

double ExpectedAgentPayoff(const FiniteGame& game, int i,
                           const MechanismProfile& profile) {
  const int num_profiles = game.NumTypeProfiles();
  double value = 0.0;
  for (int x = 0; x < num_profiles; ++x) {
    if (game.prior[x] <= 0.0) continue;
    double u = 0.0;
    for (int k = 0; k < game.NumPrincipals(); ++k) {
      u += ExpectedAgentComponent(game, i, k, profile[k].Row(x), x);
    }
    value += game.prior[x] * u;
  }
  return value;
}

double ExpectedPrincipalPayoff(const FiniteGame& game, int j,
                               const MechanismProfile& profile) {
  if (static_cast<int>(profile.size()) != game.NumPrincipals()) {
    throw InputError("mechanism profile needs one mechanism per principal");
  }
  // Linear in pi_j once the others are integrated out.
  const std::vector<double> coeffs =
      LinearPayoffCoefficients(game, j, profile, j);
  const DirectMechanism& own = profile[j];
  if (own.probs.size() != coeffs.size()) {
    throw InputError("mechanism dimension mismatch");
  }
  double value = 0.0;
  for (size_t e = 0; e < coeffs.size(); ++e) value += coeffs[e] * own.probs[e];
  return value;
}

std::vector<double> LinearPayoffCoefficients(const FiniteGame& game, int j,
                                             const MechanismProfile& profile,
                                             int free_principal) {
  const int num_principals = game.NumPrincipals();
  if (static_cast<int>(profile.size()) != num_principals) {
    throw InputError("mechanism profile needs one mechanism per principal");
  }
  for (int k = 0; k < num_principals; ++k) {
    if (k == free_principal) continue;
    if (profile[k].num_actions != game.NumActions(k) ||
        profile[k].NumProfiles() != game.NumTypeProfiles()) {
      throw InputError("mechanism dimension mismatch for principal " +
                       std::to_string(k + 1));
    }
  }
  const MixedRadix actions = game.ActionSpace();
  const int num_profiles = game.NumTypeProfiles();
  const int free_actions = game.NumActions(free_principal);
  std::vector<double> coeffs(static_cast<size_t>(num_profiles) * free_actions,
                             0.0);
  for (int x = 0; x < num_profiles; ++x) {
    const double mass = game.prior[x];
    if (mass <= 0.0) continue;
    for (int a = 0; a < actions.Size(); ++a) {
      double weight = mass;
      for (int k = 0; k < num_principals && weight != 0.0; ++k) {
        if (k == free_principal) continue;
        weight *= profile[k].At(x, actions.Digit(a, k));
      }
      if (weight == 0.0) continue;
      coeffs[static_cast<size_t>(x) * free_actions +
             actions.Digit(a, free_principal)] +=
          weight * game.PrincipalPayoff(j, a, x);
    }
  }
  return coeffs;
}

std::vector<std::vector<double>> BilinearPayoffBlocks(
    const FiniteGame& game, int j, const MechanismProfile& profile,
    int row_principal, int col_principal) {
  if (row_principal == col_principal) {
    throw InputError("bilinear blocks need two distinct principals");
  }
  const MixedRadix actions = game.ActionSpace();
  const int num_profiles = game.NumTypeProfiles();
  const int rows = game.NumActions(row_principal);
  const int cols = game.NumActions(col_principal);
  std::vector<std::vector<double>> blocks(
      num_profiles, std::vector<double>(static_cast<size_t>(rows) * cols, 0.0));
  for (int x = 0; x < num_profiles; ++x) {
    const double mass = game.prior[x];
    if (mass <= 0.0) continue;
    for (int a = 0; a < actions.Size(); ++a) {
      double weight = mass;
      for (int k = 0; k < game.NumPrincipals() && weight != 0.0; ++k) {
        if (k == row_principal || k == col_principal) continue;
        weight *= profile[k].At(x, actions.Digit(a, k));
      }
      if (weight == 0.0) continue;
      blocks[x][static_cast<size_t>(actions.Digit(a, row_principal)) * cols +
                actions.Digit(a, col_principal)] +=
          weight * game.PrincipalPayoff(j, a, x);
    }
  }
  return blocks;
}

SeparableDecomposition DecomposeSeparable(const FiniteGame& game,
                                          std::span<const double> joint,
                                          double tol) {
  const MixedRadix actions = game.ActionSpace();
  const int num_profiles = game.NumTypeProfiles();
  const int num_principals = game.NumPrincipals();
  if (joint.size() != static_cast<size_t>(actions.Size()) * num_profiles) {
    throw InputError("joint payoff table has the wrong size");
  }
  SeparableDecomposition out;
  out.components.resize(num_principals);
  for (int k = 0; k < num_principals; ++k) {
    out.components[k].assign(
        static_cast<size_t>(game.NumActions(k)) * num_profiles, 0.0);
  }

  int worst_a = 0;
  int worst_x = 0;
  for (int x = 0; x < num_profiles; ++x) {
    // Least-squares projection onto additive tables over a full factorial
    // grid: grand mean plus main effects.
    double grand = 0.0;
    for (int a = 0; a < actions.Size(); ++a) {
      grand += joint[static_cast<size_t>(a) * num_profiles + x];
    }
    grand /= actions.Size();
    std::vector<std::vector<double>> marginal(num_principals);
    for (int k = 0; k < num_principals; ++k) {
      marginal[k].assign(game.NumActions(k), 0.0);
      const double cell = static_cast<double>(actions.Size()) /
                          game.NumActions(k);
      for (int a = 0; a < actions.Size(); ++a) {
        marginal[k][actions.Digit(a, k)] +=
            joint[static_cast<size_t>(a) * num_profiles + x];
      }
      for (double& m : marginal[k]) m /= cell;
    }
    // Pin u_k(first action) = 0 for k >= 1; principal 0 absorbs constants.
    double shift = -(num_principals - 1) * grand;
    for (int k = 1; k < num_principals; ++k) {
      const double pin = marginal[k][0];
      for (int b = 0; b < game.NumActions(k); ++b) {
        out.components[k][static_cast<size_t>(b) * num_profiles + x] =
            marginal[k][b] - pin;
      }
      shift += pin;
    }
    for (int b = 0; b < game.NumActions(0); ++b) {
      out.components[0][static_cast<size_t>(b) * num_profiles + x] =
          marginal[0][b] + shift;
    }
    for (int a = 0; a < actions.Size(); ++a) {
      double fit = 0.0;
      for (int k = 0; k < num_principals; ++k) {
        fit += out.components[k][static_cast<size_t>(actions.Digit(a, k)) *
                                     num_profiles + x];
      }
      const double r =
          std::abs(joint[static_cast<size_t>(a) * num_profiles + x] - fit);
      if (r > out.residual) {
        out.residual = r;
        worst_a = a;
        worst_x = x;
      }
    }
  }
  if (out.residual > tol) throw NotSeparable(worst_a, worst_x, out.residual);
  return out;
}

}  // namespace mechpoly
