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

#include "mechpoly/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "mechpoly/bic.h"
#include "mechpoly/errors.h"
#include "mechpoly/random.h"
#include "mechpoly/solver.h"

namespace mechpoly {
namespace {

void CheckDistribution(std::span<const double> dist, double tol,
                       const std::string& where) {
  double sum = 0.0;
  for (double p : dist) {
    if (!(p >= -tol) || !std::isfinite(p)) {
      throw InputError(where + ": negative or non-finite probability");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw InputError(where + ": probabilities sum to " + std::to_string(sum));
  }
}

std::vector<double> OneHot(int size, int index) {
  std::vector<double> v(size, 0.0);
  v[index] = 1.0;
  return v;
}

int Sample(Rng& rng, std::span<const double> dist) {
  const double u = rng.Uniform();
  double acc = 0.0;
  for (size_t e = 0; e < dist.size(); ++e) {
    acc += dist[e];
    if (u < acc) return static_cast<int>(e);
  }
  // Rounding left u above the total; take the last supported entry.
  for (size_t e = dist.size(); e-- > 0;) {
    if (dist[e] > 0.0) return static_cast<int>(e);
  }
  return 0;
}

// Interim value of each pure message agent i could send to mechanism k at
// type `truth`, against the strategies of everyone else in `strategies`.
std::vector<double> AgentMessageValues(const FiniteGame& game,
                                       const GeneralMechanism& mech, int i,
                                       int truth,
                                       const ContinuationStrategies& s,
                                       const TypeProfileTable& table) {
  const int k = mech.owner;
  const MixedRadix messages = mech.MessageSpace();
  const std::vector<double> cond = ConditionalPrior(game, i, truth);
  std::vector<double> values(mech.NumAgentMessages(i), 0.0);
  for (int o = 0; o < table.NumOthers(i); ++o) {
    if (cond[o] == 0.0) continue;
    const int x = table.Compose(i, truth, o);
    for (int m0 = 0; m0 < mech.NumPrincipalMessages(); ++m0) {
      const double p0 = s.principal[k][m0];
      if (p0 == 0.0) continue;
      for (int m = 0; m < messages.Size(); ++m) {
        double w = cond[o] * p0;
        for (int l = 0; l < game.NumAgents() && w != 0.0; ++l) {
          if (l == i) continue;
          w *= s.agent[l][k][table.TypeOf(x, l)][messages.Digit(m, l)];
        }
        if (w == 0.0) continue;
        const auto row = mech.Outcome(m0, m);
        double u = 0.0;
        for (int a = 0; a < mech.num_actions; ++a) {
          u += row[a] * game.AgentPayoff(i, k, a, x);
        }
        values[messages.Digit(m, i)] += w * u;
      }
    }
  }
  return values;
}

// Largest gain of agent i over all types and pure messages to mechanism k.
Deviation WorstAgentDeviation(const FiniteGame& game,
                              const GeneralMechanism& mech, int i,
                              const ContinuationStrategies& s,
                              const TypeProfileTable& table) {
  Deviation worst;
  for (int truth = 0; truth < game.NumTypes(i); ++truth) {
    if (!game.HasPositiveMass(i, truth)) continue;
    const auto values = AgentMessageValues(game, mech, i, truth, s, table);
    const auto& dist = s.agent[i][mech.owner][truth];
    double current = 0.0;
    for (size_t m = 0; m < values.size(); ++m) current += dist[m] * values[m];
    for (size_t m = 0; m < values.size(); ++m) {
      const double gain = values[m] - current;
      if (worst.kind == DeviationKind::kNone || gain > worst.gain) {
        worst = {DeviationKind::kAgent, i, mech.owner, truth,
                 static_cast<int>(m), gain};
      }
    }
  }
  return worst;
}

bool Better(const Deviation& candidate, const Deviation& incumbent) {
  return incumbent.kind == DeviationKind::kNone ||
         (candidate.kind != DeviationKind::kNone &&
          candidate.gain > incumbent.gain);
}

std::vector<int> Projection(const PureContinuation& c, int j) {
  std::vector<int> key;
  for (size_t k = 0; k < c.principal.size(); ++k) {
    if (static_cast<int>(k) != j) key.push_back(c.principal[k]);
  }
  for (const auto& per_agent : c.agent) {
    for (size_t k = 0; k < per_agent.size(); ++k) {
      if (static_cast<int>(k) == j) continue;
      key.insert(key.end(), per_agent[k].begin(), per_agent[k].end());
    }
  }
  return key;
}

// Pure (m0, agent maps) for mechanism k satisfying the agents' conditions
// of the message game of k alone. Zero-mass types send message 0; their
// message never affects anyone's interim payoff.
struct SubgameCandidate {
  int m0 = 0;
  std::vector<std::vector<int>> maps;  // [i][x_i]
};

std::vector<SubgameCandidate> SubgameAgentEquilibria(
    const FiniteGame& game, const GeneralMechanism& mech, double tol) {
  const int num_agents = game.NumAgents();
  const int k = mech.owner;
  const TypeProfileTable table(game);

  struct Slot {
    int agent;
    int type;
  };
  std::vector<Slot> slots;
  std::vector<int> radices;
  for (int i = 0; i < num_agents; ++i) {
    for (int t = 0; t < game.NumTypes(i); ++t) {
      if (!game.HasPositiveMass(i, t)) continue;
      slots.push_back({i, t});
      radices.push_back(mech.NumAgentMessages(i));
    }
  }
  double count = mech.NumPrincipalMessages();
  for (int r : radices) count *= r;
  if (count > kMaxContinuationCandidates) {
    throw DimensionTooLarge("message game of principal " +
                            std::to_string(k + 1) + " has " +
                            std::to_string(count) + " pure profiles");
  }

  // Strategies for mechanism k only; entries for other mechanisms unused.
  ContinuationStrategies s;
  s.principal.assign(game.NumPrincipals(), {});
  s.principal[k].assign(mech.NumPrincipalMessages(), 0.0);
  s.agent.resize(num_agents);
  for (int i = 0; i < num_agents; ++i) {
    s.agent[i].resize(game.NumPrincipals());
    s.agent[i][k].assign(game.NumTypes(i),
                         OneHot(mech.NumAgentMessages(i), 0));
  }

  std::vector<SubgameCandidate> out;
  const MixedRadix space(radices.empty() ? std::vector<int>{1} : radices);
  for (int m0 = 0; m0 < mech.NumPrincipalMessages(); ++m0) {
    std::fill(s.principal[k].begin(), s.principal[k].end(), 0.0);
    s.principal[k][m0] = 1.0;
    for (int idx = 0; idx < space.Size(); ++idx) {
      SubgameCandidate c;
      c.m0 = m0;
      c.maps.resize(num_agents);
      for (int i = 0; i < num_agents; ++i) c.maps[i].assign(game.NumTypes(i), 0);
      for (size_t slot = 0; slot < slots.size(); ++slot) {
        c.maps[slots[slot].agent][slots[slot].type] =
            space.Digit(idx, static_cast<int>(slot));
      }
      for (int i = 0; i < num_agents; ++i) {
        for (int t = 0; t < game.NumTypes(i); ++t) {
          s.agent[i][k][t] = OneHot(mech.NumAgentMessages(i), c.maps[i][t]);
        }
      }
      bool ok = true;
      for (int i = 0; i < num_agents && ok; ++i) {
        ok = WorstAgentDeviation(game, mech, i, s, table).gain <= tol;
      }
      if (ok) out.push_back(std::move(c));
    }
  }
  return out;
}

double PurePayoff(const FiniteGame& game,
                  const std::vector<GeneralMechanism>& mechanisms,
                  const PureContinuation& c, int j) {
  const auto strategies = ToMixed(game, mechanisms, c);
  return ExpectedPrincipalPayoff(game, j,
                                 InduceProfile(game, mechanisms, strategies));
}

}  // namespace

MixedRadix GeneralMechanism::MessageSpace() const {
  std::vector<int> radices;
  for (const auto& m : agent_messages) {
    radices.push_back(static_cast<int>(m.size()));
  }
  return MixedRadix(radices);
}

bool GeneralMechanism::OutcomeIgnoresPrincipalMessage(double tol) const {
  const int profiles = NumMessageProfiles();
  for (int m0 = 1; m0 < NumPrincipalMessages(); ++m0) {
    for (int m = 0; m < profiles; ++m) {
      const auto a = Outcome(0, m);
      const auto b = Outcome(m0, m);
      for (int e = 0; e < num_actions; ++e) {
        if (std::abs(a[e] - b[e]) > tol) return false;
      }
    }
  }
  return true;
}

bool operator==(const GeneralMechanism& a, const GeneralMechanism& b) {
  return a.owner == b.owner && a.num_actions == b.num_actions &&
         a.principal_messages == b.principal_messages &&
         a.agent_messages == b.agent_messages && a.outcome == b.outcome &&
         a.standard == b.standard;
}

void CheckGeneralMechanism(const FiniteGame& game, const GeneralMechanism& mech,
                           double tol) {
  const std::string who = "mechanism of principal " + std::to_string(mech.owner + 1);
  if (mech.owner < 0 || mech.owner >= game.NumPrincipals()) {
    throw InputError("mechanism owner out of range");
  }
  if (mech.num_actions != game.NumActions(mech.owner)) {
    throw InputError(who + ": action count mismatch");
  }
  if (static_cast<int>(mech.agent_messages.size()) != game.NumAgents()) {
    throw InputError(who + ": needs one message set per agent");
  }
  if (mech.principal_messages.empty()) {
    throw InputError(who + ": empty principal message set");
  }
  for (const auto& m : mech.agent_messages) {
    if (m.empty()) throw InputError(who + ": empty agent message set");
  }
  const size_t expected = static_cast<size_t>(mech.NumPrincipalMessages()) *
                          mech.NumMessageProfiles() * mech.num_actions;
  if (mech.outcome.size() != expected) {
    throw InputError(who + ": outcome table has " +
                     std::to_string(mech.outcome.size()) + " entries, expected " +
                     std::to_string(expected));
  }
  for (int m0 = 0; m0 < mech.NumPrincipalMessages(); ++m0) {
    for (int m = 0; m < mech.NumMessageProfiles(); ++m) {
      CheckDistribution(mech.Outcome(m0, m), tol,
                        who + " outcome row (" + std::to_string(m0) + ", " +
                            std::to_string(m) + ")");
    }
  }
  if (mech.standard != mech.OutcomeIgnoresPrincipalMessage(tol)) {
    throw InputError(who + ": standard flag contradicts the outcome table");
  }
}

GeneralMechanism StandardDirectMechanism(const FiniteGame& game,
                                         const DirectMechanism& pi) {
  CheckDirectMechanism(game, pi.owner, pi);
  GeneralMechanism mech;
  mech.owner = pi.owner;
  mech.num_actions = pi.num_actions;
  mech.principal_messages = {"-"};
  mech.agent_messages = game.type_labels;
  mech.outcome = pi.probs;
  mech.standard = true;
  return mech;
}

ContinuationStrategies ToMixed(const FiniteGame& game,
                               const std::vector<GeneralMechanism>& mechanisms,
                               const PureContinuation& pure) {
  ContinuationStrategies s;
  for (size_t k = 0; k < mechanisms.size(); ++k) {
    s.principal.push_back(
        OneHot(mechanisms[k].NumPrincipalMessages(), pure.principal[k]));
  }
  s.agent.resize(game.NumAgents());
  for (int i = 0; i < game.NumAgents(); ++i) {
    for (size_t k = 0; k < mechanisms.size(); ++k) {
      std::vector<std::vector<double>> per_type;
      for (int t = 0; t < game.NumTypes(i); ++t) {
        per_type.push_back(
            OneHot(mechanisms[k].NumAgentMessages(i), pure.agent[i][k][t]));
      }
      s.agent[i].push_back(std::move(per_type));
    }
  }
  return s;
}

void CheckStrategies(const FiniteGame& game,
                     const std::vector<GeneralMechanism>& mechanisms,
                     const ContinuationStrategies& s, double tol) {
  const int num_principals = game.NumPrincipals();
  if (static_cast<int>(mechanisms.size()) != num_principals ||
      static_cast<int>(s.principal.size()) != num_principals ||
      static_cast<int>(s.agent.size()) != game.NumAgents()) {
    throw InputError("strategies do not match the mechanism profile");
  }
  for (int k = 0; k < num_principals; ++k) {
    if (static_cast<int>(s.principal[k].size()) !=
        mechanisms[k].NumPrincipalMessages()) {
      throw InputError("principal " + std::to_string(k + 1) +
                       ": message distribution has the wrong size");
    }
    CheckDistribution(s.principal[k], tol,
                      "principal " + std::to_string(k + 1) + " message");
  }
  for (int i = 0; i < game.NumAgents(); ++i) {
    if (static_cast<int>(s.agent[i].size()) != num_principals) {
      throw InputError("agent " + std::to_string(i + 1) +
                       ": needs strategies for every principal");
    }
    for (int k = 0; k < num_principals; ++k) {
      if (static_cast<int>(s.agent[i][k].size()) != game.NumTypes(i)) {
        throw InputError("agent " + std::to_string(i + 1) +
                         ": needs a message distribution per type");
      }
      for (int t = 0; t < game.NumTypes(i); ++t) {
        if (static_cast<int>(s.agent[i][k][t].size()) !=
            mechanisms[k].NumAgentMessages(i)) {
          throw InputError("agent " + std::to_string(i + 1) +
                           ": message distribution has the wrong size");
        }
        CheckDistribution(s.agent[i][k][t], tol,
                          "agent " + std::to_string(i + 1) + " message");
      }
    }
  }
}

DirectMechanism InduceDirectMechanism(const FiniteGame& game,
                                      const GeneralMechanism& mech,
                                      const ContinuationStrategies& s) {
  const int k = mech.owner;
  const MixedRadix types = game.TypeSpace();
  const MixedRadix messages = mech.MessageSpace();
  DirectMechanism pi;
  pi.owner = k;
  pi.num_actions = mech.num_actions;
  pi.probs.assign(static_cast<size_t>(types.Size()) * mech.num_actions, 0.0);
  for (int x = 0; x < types.Size(); ++x) {
    for (int m0 = 0; m0 < mech.NumPrincipalMessages(); ++m0) {
      const double p0 = s.principal[k][m0];
      if (p0 == 0.0) continue;
      for (int m = 0; m < messages.Size(); ++m) {
        double w = p0;
        for (int i = 0; i < game.NumAgents() && w != 0.0; ++i) {
          w *= s.agent[i][k][types.Digit(x, i)][messages.Digit(m, i)];
        }
        if (w == 0.0) continue;
        const auto row = mech.Outcome(m0, m);
        for (int a = 0; a < mech.num_actions; ++a) pi.At(x, a) += w * row[a];
      }
    }
  }
  return pi;
}

MechanismProfile InduceProfile(const FiniteGame& game,
                               const std::vector<GeneralMechanism>& mechanisms,
                               const ContinuationStrategies& strategies) {
  MechanismProfile profile;
  for (const auto& mech : mechanisms) {
    profile.push_back(InduceDirectMechanism(game, mech, strategies));
  }
  return profile;
}

MixedRadix SetValuedContract::MessageSpace() const {
  std::vector<int> radices;
  for (const auto& m : agent_messages) {
    radices.push_back(static_cast<int>(m.size()));
  }
  return MixedRadix(radices);
}

void CheckSetValuedContract(const SetValuedContract& h, double tol) {
  if (static_cast<int>(h.sets.size()) != h.MessageSpace().Size()) {
    throw InputError("contract needs one set per agent message profile");
  }
  for (size_t m = 0; m < h.sets.size(); ++m) {
    if (h.sets[m].empty()) {
      throw InputError("contract set " + std::to_string(m) + " is empty");
    }
    for (const auto& dist : h.sets[m]) {
      if (static_cast<int>(dist.size()) != h.num_actions) {
        throw InputError("contract member has the wrong action count");
      }
      CheckDistribution(dist, tol, "contract set " + std::to_string(m));
    }
  }
}

NestedContract NestSzentesContract(const SetValuedContract& h,
                                   const std::vector<int>& selection) {
  CheckSetValuedContract(h);
  NestedContract out;
  // Image sets compared as sets: members sorted, duplicates removed.
  for (const auto& raw : h.sets) {
    auto set = raw;
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    auto it = std::find(out.image_sets.begin(), out.image_sets.end(), set);
    if (it == out.image_sets.end()) {
      out.image_of.push_back(static_cast<int>(out.image_sets.size()));
      out.image_sets.push_back(std::move(set));
    } else {
      out.image_of.push_back(static_cast<int>(it - out.image_sets.begin()));
    }
  }
  double selections = 1.0;
  std::vector<int> radices;
  for (const auto& set : out.image_sets) {
    radices.push_back(static_cast<int>(set.size()));
    selections *= static_cast<double>(set.size());
  }
  if (selections > kMaxSelections) {
    throw SelectionSpaceTooLarge(std::to_string(selections) +
                                 " selection maps exceed the cap of 1e6");
  }
  const MixedRadix space(radices);

  GeneralMechanism& mech = out.mechanism;
  mech.owner = h.owner;
  mech.num_actions = h.num_actions;
  mech.agent_messages = h.agent_messages;
  for (int s = 0; s < space.Size(); ++s) {
    std::string label = "select";
    for (int d = 0; d < space.NumDigits(); ++d) {
      label += (d == 0 ? ":" : ".") + std::to_string(space.Digit(s, d));
    }
    mech.principal_messages.push_back(label);
  }
  const int profiles = h.MessageSpace().Size();
  mech.outcome.reserve(static_cast<size_t>(space.Size()) * profiles *
                       h.num_actions);
  for (int s = 0; s < space.Size(); ++s) {
    for (int m = 0; m < profiles; ++m) {
      const int image = out.image_of[m];
      const auto& member = out.image_sets[image][space.Digit(s, image)];
      mech.outcome.insert(mech.outcome.end(), member.begin(), member.end());
    }
  }
  mech.standard = mech.OutcomeIgnoresPrincipalMessage();

  if (!selection.empty()) {
    if (selection.size() != out.image_sets.size()) {
      throw InputError("selection needs one choice per image set");
    }
    for (size_t s = 0; s < selection.size(); ++s) {
      if (selection[s] < 0 ||
          selection[s] >= static_cast<int>(out.image_sets[s].size())) {
        throw InputError("selection choice out of range for image set " +
                         std::to_string(s));
      }
    }
    out.selected_message = space.Encode(selection);
  }
  return out;
}

GeneralMechanism BuildTypeAndDmMechanism(
    const FiniteGame& game, int j, const std::vector<DirectMechanism>& menu,
    double tol) {
  if (menu.empty()) throw InputError("type-and-DM menu is empty");
  const BicPolytope poly = BuildBicPolytope(game, j);
  GeneralMechanism mech;
  mech.owner = j;
  mech.num_actions = game.NumActions(j);
  mech.agent_messages = game.type_labels;
  for (size_t e = 0; e < menu.size(); ++e) {
    CheckDirectMechanism(game, j, menu[e]);
    const BicVerdict verdict = IsIndividuallyBic(poly, menu[e], tol);
    if (!verdict.ok) {
      throw MenuEntryNotBic("menu entry " + std::to_string(e + 1) +
                            " violates IC by " +
                            std::to_string(-verdict.worst->value));
    }
    mech.principal_messages.push_back("menu" + std::to_string(e + 1));
    mech.outcome.insert(mech.outcome.end(), menu[e].probs.begin(),
                        menu[e].probs.end());
  }
  mech.standard = mech.OutcomeIgnoresPrincipalMessage();
  return mech;
}

int DeviatorBranch(int k, std::span<const int> named) {
  const int num_agents = static_cast<int>(named.size());
  std::map<int, int> counts;
  for (int l : named) {
    if (l != k) ++counts[l];
  }
  for (const auto& [j, count] : counts) {
    if (2 * count > num_agents) return j;
  }
  return k;
}

GeneralMechanism BuildDeviatorReporting(
    const FiniteGame& game, int k, const DirectMechanism& pi_star,
    const std::vector<DirectMechanism>& punishments, double tol) {
  const int num_principals = game.NumPrincipals();
  const int num_agents = game.NumAgents();
  if (num_agents < 3) {
    throw TooFewAgents("deviator-reporting needs at least three agents, got " +
                       std::to_string(num_agents));
  }
  if (static_cast<int>(punishments.size()) != num_principals) {
    throw InputError("need one punishment entry per principal");
  }
  const BicPolytope poly = BuildBicPolytope(game, k);
  auto require_bic = [&](const DirectMechanism& pi, const std::string& what) {
    CheckDirectMechanism(game, k, pi);
    const BicVerdict verdict = IsIndividuallyBic(poly, pi, tol);
    if (!verdict.ok) {
      throw NotBic(what + " violates IC by " +
                   std::to_string(-verdict.worst->value));
    }
  };
  require_bic(pi_star, "on-path mechanism");
  for (int j = 0; j < num_principals; ++j) {
    if (j != k) {
      require_bic(punishments[j], "punishment for principal " +
                                      game.principal_ids[j]);
    }
  }

  GeneralMechanism mech;
  mech.owner = k;
  mech.num_actions = game.NumActions(k);
  mech.principal_messages = {"-"};
  for (int i = 0; i < num_agents; ++i) {
    std::vector<std::string> labels;
    for (int l = 0; l < num_principals; ++l) {
      for (int t = 0; t < game.NumTypes(i); ++t) {
        labels.push_back(game.principal_ids[l] + ":" + game.type_labels[i][t]);
      }
    }
    mech.agent_messages.push_back(std::move(labels));
  }
  const MixedRadix messages = mech.MessageSpace();
  const MixedRadix types = game.TypeSpace();
  std::vector<int> named(num_agents), reported(num_agents);
  mech.outcome.reserve(static_cast<size_t>(messages.Size()) * mech.num_actions);
  for (int m = 0; m < messages.Size(); ++m) {
    for (int i = 0; i < num_agents; ++i) {
      const int digit = messages.Digit(m, i);
      named[i] = digit / game.NumTypes(i);
      reported[i] = digit % game.NumTypes(i);
    }
    const int branch = DeviatorBranch(k, named);
    const DirectMechanism& pi = branch == k ? pi_star : punishments[branch];
    const auto row = pi.Row(types.Encode(reported));
    mech.outcome.insert(mech.outcome.end(), row.begin(), row.end());
  }
  mech.standard = true;
  return mech;
}

ContinuationVerdict CheckContinuationEquilibrium(
    const FiniteGame& game, const std::vector<GeneralMechanism>& mechanisms,
    const ContinuationStrategies& strategies, double tol) {
  CheckStrategies(game, mechanisms, strategies);
  const TypeProfileTable table(game);
  ContinuationVerdict verdict;
  for (int i = 0; i < game.NumAgents(); ++i) {
    for (const auto& mech : mechanisms) {
      const Deviation d = WorstAgentDeviation(game, mech, i, strategies, table);
      if (Better(d, verdict.worst)) verdict.worst = d;
    }
  }

  MechanismProfile induced = InduceProfile(game, mechanisms, strategies);
  for (int j = 0; j < game.NumPrincipals(); ++j) {
    const auto c = LinearPayoffCoefficients(game, j, induced, j);
    auto value_of = [&](const DirectMechanism& pi) {
      double v = 0.0;
      for (size_t e = 0; e < c.size(); ++e) v += c[e] * pi.probs[e];
      return v;
    };
    const double current = value_of(induced[j]);
    ContinuationStrategies alt = strategies;
    for (int m0 = 0; m0 < mechanisms[j].NumPrincipalMessages(); ++m0) {
      alt.principal[j] = OneHot(mechanisms[j].NumPrincipalMessages(), m0);
      const double gain =
          value_of(InduceDirectMechanism(game, mechanisms[j], alt)) - current;
      const Deviation d{DeviationKind::kPrincipal, j, j, -1, m0, gain};
      if (Better(d, verdict.worst)) verdict.worst = d;
    }
  }
  verdict.ok = verdict.worst.kind == DeviationKind::kNone ||
               verdict.worst.gain <= tol;
  return verdict;
}

std::vector<PureContinuation> EnumeratePureContinuationEquilibria(
    const FiniteGame& game, const std::vector<GeneralMechanism>& mechanisms,
    double tol) {
  const int num_principals = game.NumPrincipals();
  if (static_cast<int>(mechanisms.size()) != num_principals) {
    throw InputError("need one mechanism per principal");
  }
  std::vector<std::vector<SubgameCandidate>> per_principal;
  std::vector<int> radices;
  double combos = 1.0;
  for (const auto& mech : mechanisms) {
    CheckGeneralMechanism(game, mech, 1e-9);
    per_principal.push_back(SubgameAgentEquilibria(game, mech, tol));
    if (per_principal.back().empty()) return {};
    radices.push_back(static_cast<int>(per_principal.back().size()));
    combos *= static_cast<double>(per_principal.back().size());
  }
  if (combos > kMaxContinuationCandidates) {
    throw DimensionTooLarge(std::to_string(combos) +
                            " candidate continuation profiles exceed the cap");
  }
  const MixedRadix space(radices);
  std::vector<PureContinuation> out;
  for (int idx = 0; idx < space.Size(); ++idx) {
    PureContinuation c;
    c.principal.resize(num_principals);
    c.agent.assign(game.NumAgents(),
                   std::vector<std::vector<int>>(num_principals));
    for (int k = 0; k < num_principals; ++k) {
      const SubgameCandidate& part = per_principal[k][space.Digit(idx, k)];
      c.principal[k] = part.m0;
      for (int i = 0; i < game.NumAgents(); ++i) c.agent[i][k] = part.maps[i];
    }
    if (CheckContinuationEquilibrium(game, mechanisms,
                                     ToMixed(game, mechanisms, c), tol)
            .ok) {
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<MechanismProfile> RealizedOtherProfiles(
    const FiniteGame& game, const std::vector<GeneralMechanism>& mechanisms,
    int j, double tol) {
  const int num_principals = game.NumPrincipals();
  std::vector<std::vector<DirectMechanism>> realized(num_principals);
  std::vector<int> radices;
  for (int k = 0; k < num_principals; ++k) {
    if (k == j) continue;
    CheckGeneralMechanism(game, mechanisms[k], 1e-9);
    for (const auto& part : SubgameAgentEquilibria(game, mechanisms[k], tol)) {
      PureContinuation c;
      c.principal.assign(num_principals, 0);
      c.principal[k] = part.m0;
      c.agent.assign(game.NumAgents(),
                     std::vector<std::vector<int>>(num_principals));
      for (int i = 0; i < game.NumAgents(); ++i) {
        for (int l = 0; l < num_principals; ++l) {
          c.agent[i][l] = l == k ? part.maps[i]
                                 : std::vector<int>(game.NumTypes(i), 0);
        }
      }
      DirectMechanism pi = InduceDirectMechanism(
          game, mechanisms[k], ToMixed(game, mechanisms, c));
      if (std::find(realized[k].begin(), realized[k].end(), pi) ==
          realized[k].end()) {
        realized[k].push_back(std::move(pi));
      }
    }
    radices.push_back(static_cast<int>(realized[k].size()));
  }
  std::vector<MechanismProfile> out;
  if (std::find(radices.begin(), radices.end(), 0) != radices.end()) return out;
  const MixedRadix space(radices);
  for (int idx = 0; idx < space.Size(); ++idx) {
    MechanismProfile profile;
    int pos = 0;
    for (int k = 0; k < num_principals; ++k) {
      if (k == j) {
        const std::vector<double> alpha(game.NumActions(k),
                                        1.0 / game.NumActions(k));
        profile.push_back(
            DirectMechanism::Constant(k, game.NumTypeProfiles(), alpha));
      } else {
        profile.push_back(realized[k][space.Digit(idx, pos++)]);
      }
    }
    out.push_back(std::move(profile));
  }
  return out;
}

std::string ToString(EquilibriumNotion notion) {
  switch (notion) {
    case EquilibriumNotion::kPbe:
      return "pbe";
    case EquilibriumNotion::kRobust:
      return "robust";
    case EquilibriumNotion::kStronglyRobust:
      return "strongly-robust";
  }
  return "unknown";
}

std::optional<EquilibriumNotion> ParseEquilibriumNotion(const std::string& s) {
  for (auto notion : {EquilibriumNotion::kPbe, EquilibriumNotion::kRobust,
                      EquilibriumNotion::kStronglyRobust}) {
    if (ToString(notion) == s) return notion;
  }
  return std::nullopt;
}

std::string ToString(NotionStatus status) {
  switch (status) {
    case NotionStatus::kTrue:
      return "true";
    case NotionStatus::kFalse:
      return "false";
    case NotionStatus::kInfeasibleCheck:
      return "infeasible-check";
  }
  return "unknown";
}

NotionVerdict CheckEquilibriumNotion(const FiniteGame& game,
                                     const EquilibriumCandidate& candidate,
                                     EquilibriumNotion notion, double tol) {
  const int num_principals = game.NumPrincipals();
  if (static_cast<int>(candidate.deviations.size()) != num_principals) {
    throw InputError("need one deviation set per principal");
  }
  for (int j = 0; j < num_principals; ++j) {
    if (candidate.deviations[j].empty()) {
      throw DeviationSetEmpty("deviation set of principal " +
                              game.principal_ids[j] + " is empty");
    }
  }
  for (const auto& mech : candidate.mechanisms) {
    CheckGeneralMechanism(game, mech, 1e-9);
  }

  NotionVerdict verdict;
  verdict.notion = notion;
  verdict.on_path = CheckContinuationEquilibrium(game, candidate.mechanisms,
                                                 candidate.on_path);
  const MechanismProfile induced =
      InduceProfile(game, candidate.mechanisms, candidate.on_path);
  for (int j = 0; j < num_principals; ++j) {
    verdict.equilibrium_payoffs.push_back(
        ExpectedPrincipalPayoff(game, j, induced));
  }

  bool infeasible = false;
  bool profitable = !verdict.on_path.ok;
  for (int j = 0; j < num_principals; ++j) {
    for (size_t d = 0; d < candidate.deviations[j].size(); ++d) {
      const GeneralMechanism& gamma = candidate.deviations[j][d];
      if (gamma.owner != j) {
        throw InputError("deviation mechanism owner mismatch for principal " +
                         game.principal_ids[j]);
      }
      DeviationOutcome outcome;
      outcome.principal = j;
      outcome.index = static_cast<int>(d);
      if (gamma == candidate.mechanisms[j]) {
        outcome.identical = true;
        verdict.deviations.push_back(outcome);
        continue;
      }
      std::vector<GeneralMechanism> subgame = candidate.mechanisms;
      subgame[j] = gamma;
      const auto equilibria =
          EnumeratePureContinuationEquilibria(game, subgame);
      outcome.num_equilibria = static_cast<int>(equilibria.size());
      if (equilibria.empty()) {
        infeasible = true;
        verdict.deviations.push_back(outcome);
        continue;
      }
      std::vector<double> payoffs;
      for (const auto& c : equilibria) {
        payoffs.push_back(PurePayoff(game, subgame, c, j));
      }
      switch (notion) {
        case EquilibriumNotion::kPbe:
          outcome.value = *std::min_element(payoffs.begin(), payoffs.end());
          break;
        case EquilibriumNotion::kStronglyRobust:
          outcome.value = *std::max_element(payoffs.begin(), payoffs.end());
          break;
        case EquilibriumNotion::kRobust: {
          std::map<std::vector<int>, double> best_completion;
          for (size_t e = 0; e < equilibria.size(); ++e) {
            const auto key = Projection(equilibria[e], j);
            auto [it, inserted] = best_completion.emplace(key, payoffs[e]);
            if (!inserted) it->second = std::max(it->second, payoffs[e]);
          }
          outcome.value = std::numeric_limits<double>::infinity();
          for (const auto& [key, value] : best_completion) {
            outcome.value = std::min(outcome.value, value);
          }
          break;
        }
      }
      outcome.profitable =
          outcome.value > verdict.equilibrium_payoffs[j] + tol;
      profitable = profitable || outcome.profitable;
      const double gain = outcome.value - verdict.equilibrium_payoffs[j];
      if (!verdict.worst ||
          gain > verdict.worst->value -
                     verdict.equilibrium_payoffs[verdict.worst->principal]) {
        verdict.worst = outcome;
      }
      verdict.deviations.push_back(outcome);
    }
  }
  if (profitable) {
    verdict.status = NotionStatus::kFalse;
  } else if (infeasible) {
    verdict.status = NotionStatus::kInfeasibleCheck;
  } else {
    verdict.status = NotionStatus::kTrue;
  }
  return verdict;
}

EquilibriumCandidate BuildRobustSupport(
    const FiniteGame& game, const MechanismProfile& target,
    const std::vector<MechanismProfile>& punishments) {
  const int num_principals = game.NumPrincipals();
  CheckMechanismProfile(game, target);
  if (static_cast<int>(punishments.size()) != num_principals) {
    throw InputError("need one punishment profile per principal");
  }
  EquilibriumCandidate candidate;
  for (int k = 0; k < num_principals; ++k) {
    std::vector<DirectMechanism> against(num_principals, target[k]);
    for (int j = 0; j < num_principals; ++j) {
      if (j != k) against[j] = punishments[j][k];
    }
    candidate.mechanisms.push_back(
        BuildDeviatorReporting(game, k, target[k], against));
  }
  candidate.on_path.principal.assign(num_principals, {1.0});
  candidate.on_path.agent.resize(game.NumAgents());
  for (int i = 0; i < game.NumAgents(); ++i) {
    const int num_types = game.NumTypes(i);
    for (int k = 0; k < num_principals; ++k) {
      std::vector<std::vector<double>> per_type;
      for (int t = 0; t < num_types; ++t) {
        per_type.push_back(OneHot(num_principals * num_types, k * num_types + t));
      }
      candidate.on_path.agent[i].push_back(std::move(per_type));
    }
  }
  candidate.deviations.assign(num_principals, {});
  return candidate;
}

GeneralMechanism BuildBestResponseMenu(
    const FiniteGame& game, int j, const std::vector<MechanismProfile>& others) {
  const BicPolytope own = BuildBicPolytope(game, j);
  std::vector<DirectMechanism> menu;
  for (const auto& profile : others) {
    DirectMechanism reply = ComputeBestResponse(game, own, profile).mechanism;
    if (std::find(menu.begin(), menu.end(), reply) == menu.end()) {
      menu.push_back(std::move(reply));
    }
  }
  return BuildTypeAndDmMechanism(game, j, menu);
}

GeneralMechanism RandomGeneralMechanism(const FiniteGame& game, int j,
                                        int max_messages, std::uint64_t seed) {
  if (max_messages < 1) throw InputError("max_messages must be >= 1");
  Rng rng(seed);
  GeneralMechanism mech;
  mech.owner = j;
  mech.num_actions = game.NumActions(j);
  const int m0 = 1 + rng.Below(max_messages);
  for (int m = 0; m < m0; ++m) mech.principal_messages.push_back("s" + std::to_string(m));
  for (int i = 0; i < game.NumAgents(); ++i) {
    const int count = 1 + rng.Below(max_messages);
    std::vector<std::string> labels;
    for (int m = 0; m < count; ++m) labels.push_back("m" + std::to_string(m));
    mech.agent_messages.push_back(std::move(labels));
  }
  const int rows = m0 * mech.NumMessageProfiles();
  for (int r = 0; r < rows; ++r) {
    // Mostly degenerate rows keep pure continuation equilibria common.
    std::vector<double> row = rng.Uniform() < 0.5
                                  ? OneHot(mech.num_actions,
                                           rng.Below(mech.num_actions))
                                  : rng.Simplex(mech.num_actions);
    mech.outcome.insert(mech.outcome.end(), row.begin(), row.end());
  }
  mech.standard = mech.OutcomeIgnoresPrincipalMessage();
  return mech;
}

SimulationReport Simulate(const FiniteGame& game,
                          const std::vector<GeneralMechanism>& mechanisms,
                          const ContinuationStrategies& strategies,
                          std::uint64_t seed, int rounds) {
  if (rounds < 1) throw InputError("rounds must be >= 1");
  for (const auto& mech : mechanisms) CheckGeneralMechanism(game, mech, 1e-9);
  CheckStrategies(game, mechanisms, strategies);
  const int num_principals = game.NumPrincipals();
  const int num_agents = game.NumAgents();
  const MixedRadix types = game.TypeSpace();
  const MixedRadix actions = game.ActionSpace();

  SimulationReport report;
  report.seed = seed;
  report.rounds = rounds;
  std::vector<double> psum(num_principals, 0.0), psq(num_principals, 0.0);
  std::vector<double> asum(num_agents, 0.0), asq(num_agents, 0.0);
  report.action_frequency.resize(num_principals);
  for (int k = 0; k < num_principals; ++k) {
    report.action_frequency[k].assign(game.NumActions(k), 0.0);
  }

  Rng rng(seed);
  std::vector<int> action(num_principals), message(num_agents);
  for (int r = 0; r < rounds; ++r) {
    const int x = Sample(rng, game.prior);
    for (int k = 0; k < num_principals; ++k) {
      const auto& mech = mechanisms[k];
      const int m0 = Sample(rng, strategies.principal[k]);
      for (int i = 0; i < num_agents; ++i) {
        message[i] = Sample(rng, strategies.agent[i][k][types.Digit(x, i)]);
      }
      const int m = mech.MessageSpace().Encode(message);
      action[k] = Sample(rng, mech.Outcome(m0, m));
      report.action_frequency[k][action[k]] += 1.0;
    }
    const int a = actions.Encode(action);
    for (int j = 0; j < num_principals; ++j) {
      const double v = game.PrincipalPayoff(j, a, x);
      psum[j] += v;
      psq[j] += v * v;
    }
    for (int i = 0; i < num_agents; ++i) {
      double u = 0.0;
      for (int k = 0; k < num_principals; ++k) {
        u += game.AgentPayoff(i, k, action[k], x);
      }
      asum[i] += u;
      asq[i] += u * u;
    }
  }
  auto finish = [&](const std::vector<double>& sum,
                    const std::vector<double>& sq, std::vector<double>& mean,
                    std::vector<double>& stderr_out) {
    for (size_t p = 0; p < sum.size(); ++p) {
      const double mu = sum[p] / rounds;
      const double var =
          rounds > 1 ? std::max(0.0, (sq[p] - rounds * mu * mu) / (rounds - 1))
                     : 0.0;
      mean.push_back(mu);
      stderr_out.push_back(std::sqrt(var / rounds));
    }
  };
  finish(psum, psq, report.principal_mean, report.principal_stderr);
  finish(asum, asq, report.agent_mean, report.agent_stderr);
  for (auto& freq : report.action_frequency) {
    for (double& f : freq) f /= rounds;
  }

  const MechanismProfile induced = InduceProfile(game, mechanisms, strategies);
  for (int j = 0; j < num_principals; ++j) {
    report.principal_analytic.push_back(
        ExpectedPrincipalPayoff(game, j, induced));
  }
  for (int i = 0; i < num_agents; ++i) {
    report.agent_analytic.push_back(ExpectedAgentPayoff(game, i, induced));
  }
  return report;
}

}  // namespace mechpoly
