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

#include "mechpoly/io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "mechpoly/errors.h"

namespace mechpoly {
namespace {

std::string Field(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string Index(const std::string& path, size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json& Require(const Json& doc, const std::string& key,
                    const std::string& path) {
  if (!doc.is_object()) throw InputError(path + ": expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) throw InputError(Field(path, key) + ": missing field");
  return *it;
}

const Json& RequireArray(const Json& doc, const std::string& key,
                         const std::string& path) {
  const Json& value = Require(doc, key, path);
  if (!value.is_array()) throw InputError(Field(path, key) + ": expected an array");
  return value;
}

// Ids may be written as strings or integers.
std::string AsLabel(const Json& value, const std::string& path) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  throw InputError(path + ": expected a string label");
}

double AsNumber(const Json& value, const std::string& path) {
  if (!value.is_number()) throw InputError(path + ": expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw InputError(path + ": non-finite number");
  return v;
}

std::vector<std::string> AsLabels(const Json& value, const std::string& path) {
  if (!value.is_array()) throw InputError(path + ": expected an array");
  std::vector<std::string> out;
  for (size_t e = 0; e < value.size(); ++e) {
    out.push_back(AsLabel(value[e], Index(path, e)));
  }
  return out;
}

std::vector<double> AsNumbers(const Json& value, const std::string& path) {
  if (!value.is_array()) throw InputError(path + ": expected an array");
  std::vector<double> out;
  for (size_t e = 0; e < value.size(); ++e) {
    out.push_back(AsNumber(value[e], Index(path, e)));
  }
  return out;
}

int Lookup(const std::vector<std::string>& labels, const std::string& label,
           const std::string& path, const char* what) {
  for (size_t e = 0; e < labels.size(); ++e) {
    if (labels[e] == label) return static_cast<int>(e);
  }
  throw InputError(path + ": unknown " + what + " '" + label + "'");
}

void CheckUnique(const std::vector<std::string>& labels,
                 const std::string& path) {
  for (size_t a = 0; a < labels.size(); ++a) {
    for (size_t b = a + 1; b < labels.size(); ++b) {
      if (labels[a] == labels[b]) {
        throw InputError(path + ": duplicate label '" + labels[a] + "'");
      }
    }
  }
}

int ParseTypeProfile(const FiniteGame& game, const Json& value,
                     const std::string& path) {
  const auto labels = AsLabels(value, path);
  if (static_cast<int>(labels.size()) != game.NumAgents()) {
    throw InputError(path + ": expected one type per agent");
  }
  std::vector<int> digits;
  for (int i = 0; i < game.NumAgents(); ++i) {
    digits.push_back(
        Lookup(game.type_labels[i], labels[i], Index(path, i), "type"));
  }
  return game.TypeSpace().Encode(digits);
}

int ParseActionProfile(const FiniteGame& game, const Json& value,
                       const std::string& path) {
  const auto labels = AsLabels(value, path);
  if (static_cast<int>(labels.size()) != game.NumPrincipals()) {
    throw InputError(path + ": expected one action per principal");
  }
  std::vector<int> digits;
  for (int j = 0; j < game.NumPrincipals(); ++j) {
    digits.push_back(
        Lookup(game.action_labels[j], labels[j], Index(path, j), "action"));
  }
  return game.ActionSpace().Encode(digits);
}

Json TypeProfileJson(const FiniteGame& game, int x) {
  Json out = Json::array();
  const MixedRadix space = game.TypeSpace();
  for (int i = 0; i < game.NumAgents(); ++i) {
    out.push_back(game.type_labels[i][space.Digit(x, i)]);
  }
  return out;
}

Json ActionProfileJson(const FiniteGame& game, int a) {
  Json out = Json::array();
  const MixedRadix space = game.ActionSpace();
  for (int j = 0; j < game.NumPrincipals(); ++j) {
    out.push_back(game.action_labels[j][space.Digit(a, j)]);
  }
  return out;
}

int ParsePrincipal(const FiniteGame& game, const Json& value,
                   const std::string& path) {
  return Lookup(game.principal_ids, AsLabel(value, path), path, "principal");
}

int ParseAgent(const FiniteGame& game, const Json& value,
               const std::string& path) {
  return Lookup(game.agent_ids, AsLabel(value, path), path, "agent");
}

// Fills a dense table, rejecting duplicates and reporting the first hole.
class DenseFill {
 public:
  DenseFill(std::vector<double>& table, std::string what)
      : table_(table), seen_(table.size(), false), what_(std::move(what)) {}
  void Set(size_t index, double value, const std::string& path) {
    if (seen_[index]) throw InputError(path + ": duplicate " + what_ + " entry");
    seen_[index] = true;
    table_[index] = value;
  }
  bool Complete() const {
    return std::all_of(seen_.begin(), seen_.end(), [](bool b) { return b; });
  }
  size_t FirstMissing() const {
    return static_cast<size_t>(std::find(seen_.begin(), seen_.end(), false) -
                               seen_.begin());
  }

 private:
  std::vector<double>& table_;
  std::vector<bool> seen_;
  std::string what_;
};

}  // namespace

Json ParseJsonText(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    size_t line = 1, column = 1;
    const size_t limit = std::min<size_t>(e.byte, text.size());
    for (size_t b = 0; b + 1 < limit; ++b) {
      if (text[b] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InputError(source + ":" + std::to_string(line) + ":" +
                     std::to_string(column) + ": JSON syntax error");
  }
}

Json LoadJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseJsonText(buffer.str(), path);
}

FiniteGame ParseGame(const Json& doc) {
  FiniteGame game;
  const Json& principals = RequireArray(doc, "principals", "");
  for (size_t j = 0; j < principals.size(); ++j) {
    const std::string path = Index("principals", j);
    game.principal_ids.push_back(AsLabel(Require(principals[j], "id", path),
                                         Field(path, "id")));
    game.action_labels.push_back(
        AsLabels(Require(principals[j], "actions", path), Field(path, "actions")));
    CheckUnique(game.action_labels.back(), Field(path, "actions"));
    if (game.action_labels.back().empty()) {
      throw InputError(Field(path, "actions") + ": empty action set");
    }
  }
  CheckUnique(game.principal_ids, "principals");
  const Json& agents = RequireArray(doc, "agents", "");
  for (size_t i = 0; i < agents.size(); ++i) {
    const std::string path = Index("agents", i);
    game.agent_ids.push_back(
        AsLabel(Require(agents[i], "id", path), Field(path, "id")));
    game.type_labels.push_back(
        AsLabels(Require(agents[i], "types", path), Field(path, "types")));
    CheckUnique(game.type_labels.back(), Field(path, "types"));
    if (game.type_labels.back().empty()) {
      throw InputError(Field(path, "types") + ": empty type set");
    }
  }
  CheckUnique(game.agent_ids, "agents");
  if (game.NumAgents() == 0) throw InputError("agents: at least one agent required");
  if (game.NumPrincipals() == 0) {
    throw InputError("principals: at least one principal required");
  }

  const int num_profiles = game.NumTypeProfiles();
  const int num_principals = game.NumPrincipals();
  game.prior.assign(num_profiles, 0.0);
  {
    std::vector<bool> seen(num_profiles, false);
    const Json& prior = RequireArray(doc, "prior", "");
    for (size_t e = 0; e < prior.size(); ++e) {
      const std::string path = Index("prior", e);
      const int x = ParseTypeProfile(game, Require(prior[e], "profile", path),
                                     Field(path, "profile"));
      if (seen[x]) throw InputError(path + ": duplicate prior entry");
      seen[x] = true;
      game.prior[x] = AsNumber(Require(prior[e], "p", path), Field(path, "p"));
    }
  }

  game.agent_payoffs.resize(game.NumAgents());
  std::vector<bool> joint(game.NumAgents(), false);
  if (doc.contains("agent_joint_payoffs")) {
    const Json& rows = RequireArray(doc, "agent_joint_payoffs", "");
    std::vector<std::vector<double>> tables(game.NumAgents());
    std::vector<std::unique_ptr<DenseFill>> fills(game.NumAgents());
    const size_t size =
        static_cast<size_t>(game.NumActionProfiles()) * num_profiles;
    for (size_t e = 0; e < rows.size(); ++e) {
      const std::string path = Index("agent_joint_payoffs", e);
      const int i = ParseAgent(game, Require(rows[e], "agent", path),
                               Field(path, "agent"));
      if (!joint[i]) {
        joint[i] = true;
        tables[i].assign(size, 0.0);
        fills[i] = std::make_unique<DenseFill>(tables[i], "joint payoff");
      }
      const int a = ParseActionProfile(
          game, Require(rows[e], "action_profile", path),
          Field(path, "action_profile"));
      const int x = ParseTypeProfile(game, Require(rows[e], "profile", path),
                                     Field(path, "profile"));
      fills[i]->Set(static_cast<size_t>(a) * num_profiles + x,
                    AsNumber(Require(rows[e], "u", path), Field(path, "u")),
                    path);
    }
    for (int i = 0; i < game.NumAgents(); ++i) {
      if (!joint[i]) continue;
      if (!fills[i]->Complete()) {
        const size_t hole = fills[i]->FirstMissing();
        throw InputError("agent_joint_payoffs: agent " + game.agent_ids[i] +
                         " missing action profile " +
                         ActionProfileJson(game, hole / num_profiles).dump() +
                         " at type profile " +
                         TypeProfileJson(game, hole % num_profiles).dump());
      }
      game.agent_payoffs[i] = DecomposeSeparable(game, tables[i]).components;
    }
  }

  std::vector<std::vector<std::unique_ptr<DenseFill>>> fills(game.NumAgents());
  for (int i = 0; i < game.NumAgents(); ++i) {
    if (joint[i]) continue;
    game.agent_payoffs[i].resize(num_principals);
    for (int k = 0; k < num_principals; ++k) {
      game.agent_payoffs[i][k].assign(
          static_cast<size_t>(game.NumActions(k)) * num_profiles, 0.0);
      fills[i].push_back(
          std::make_unique<DenseFill>(game.agent_payoffs[i][k], "agent payoff"));
    }
  }
  const bool need_separable =
      std::find(joint.begin(), joint.end(), false) != joint.end();
  if (need_separable || doc.contains("agent_payoffs")) {
    const Json& rows = RequireArray(doc, "agent_payoffs", "");
    for (size_t e = 0; e < rows.size(); ++e) {
      const std::string path = Index("agent_payoffs", e);
      const int i = ParseAgent(game, Require(rows[e], "agent", path),
                               Field(path, "agent"));
      if (joint[i]) {
        throw InputError(path + ": agent " + game.agent_ids[i] +
                         " already has a joint payoff table");
      }
      const int k = ParsePrincipal(game, Require(rows[e], "principal", path),
                                   Field(path, "principal"));
      const int a = Lookup(game.action_labels[k],
                           AsLabel(Require(rows[e], "action", path),
                                   Field(path, "action")),
                           Field(path, "action"), "action");
      const int x = ParseTypeProfile(game, Require(rows[e], "profile", path),
                                     Field(path, "profile"));
      fills[i][k]->Set(static_cast<size_t>(a) * num_profiles + x,
                       AsNumber(Require(rows[e], "u", path), Field(path, "u")),
                       path);
    }
  }
  for (int i = 0; i < game.NumAgents(); ++i) {
    if (joint[i]) continue;
    for (int k = 0; k < num_principals; ++k) {
      if (!fills[i][k]->Complete()) {
        const size_t hole = fills[i][k]->FirstMissing();
        throw InputError(
            "agent_payoffs: missing entry for agent " + game.agent_ids[i] +
            ", principal " + game.principal_ids[k] + ", action " +
            game.action_labels[k][hole / num_profiles] + ", profile " +
            TypeProfileJson(game, static_cast<int>(hole % num_profiles)).dump());
      }
    }
  }

  const size_t joint_size =
      static_cast<size_t>(game.NumActionProfiles()) * num_profiles;
  game.principal_payoffs.assign(num_principals,
                                std::vector<double>(joint_size, 0.0));
  {
    std::vector<std::unique_ptr<DenseFill>> pfills;
    for (int j = 0; j < num_principals; ++j) {
      pfills.push_back(std::make_unique<DenseFill>(game.principal_payoffs[j],
                                                   "principal payoff"));
    }
    const Json& rows = RequireArray(doc, "principal_payoffs", "");
    for (size_t e = 0; e < rows.size(); ++e) {
      const std::string path = Index("principal_payoffs", e);
      const int j = ParsePrincipal(game, Require(rows[e], "principal", path),
                                   Field(path, "principal"));
      const int a = ParseActionProfile(
          game, Require(rows[e], "action_profile", path),
          Field(path, "action_profile"));
      const int x = ParseTypeProfile(game, Require(rows[e], "profile", path),
                                     Field(path, "profile"));
      pfills[j]->Set(static_cast<size_t>(a) * num_profiles + x,
                     AsNumber(Require(rows[e], "v", path), Field(path, "v")),
                     path);
    }
    for (int j = 0; j < num_principals; ++j) {
      if (!pfills[j]->Complete()) {
        const size_t hole = pfills[j]->FirstMissing();
        throw InputError(
            "principal_payoffs: missing entry for principal " +
            game.principal_ids[j] + ", action profile " +
            ActionProfileJson(game, static_cast<int>(hole / num_profiles)).dump() +
            ", profile " +
            TypeProfileJson(game, static_cast<int>(hole % num_profiles)).dump());
      }
    }
  }
  return game;
}

FiniteGame LoadGame(const std::string& path) {
  return ParseGame(LoadJsonFile(path));
}

Json GameToJson(const FiniteGame& game) {
  Json doc;
  const int num_profiles = game.NumTypeProfiles();
  doc["principals"] = Json::array();
  for (int j = 0; j < game.NumPrincipals(); ++j) {
    doc["principals"].push_back(
        {{"id", game.principal_ids[j]}, {"actions", game.action_labels[j]}});
  }
  doc["agents"] = Json::array();
  for (int i = 0; i < game.NumAgents(); ++i) {
    doc["agents"].push_back(
        {{"id", game.agent_ids[i]}, {"types", game.type_labels[i]}});
  }
  doc["prior"] = Json::array();
  for (int x = 0; x < num_profiles; ++x) {
    doc["prior"].push_back(
        {{"profile", TypeProfileJson(game, x)}, {"p", game.prior[x]}});
  }
  doc["agent_payoffs"] = Json::array();
  for (int i = 0; i < game.NumAgents(); ++i) {
    for (int k = 0; k < game.NumPrincipals(); ++k) {
      for (int a = 0; a < game.NumActions(k); ++a) {
        for (int x = 0; x < num_profiles; ++x) {
          doc["agent_payoffs"].push_back({{"agent", game.agent_ids[i]},
                                          {"principal", game.principal_ids[k]},
                                          {"action", game.action_labels[k][a]},
                                          {"profile", TypeProfileJson(game, x)},
                                          {"u", game.AgentPayoff(i, k, a, x)}});
        }
      }
    }
  }
  doc["principal_payoffs"] = Json::array();
  for (int j = 0; j < game.NumPrincipals(); ++j) {
    for (int a = 0; a < game.NumActionProfiles(); ++a) {
      for (int x = 0; x < num_profiles; ++x) {
        doc["principal_payoffs"].push_back(
            {{"principal", game.principal_ids[j]},
             {"action_profile", ActionProfileJson(game, a)},
             {"profile", TypeProfileJson(game, x)},
             {"v", game.PrincipalPayoff(j, a, x)}});
      }
    }
  }
  return doc;
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string HexDigest(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

std::string GameHash(const FiniteGame& game) {
  return HexDigest(Fnv1a64(GameToJson(game).dump()));
}

DirectMechanism ParseDirectMechanism(const FiniteGame& game, const Json& doc,
                                     const std::string& path) {
  DirectMechanism mech;
  mech.owner = ParsePrincipal(game, Require(doc, "owner", path),
                              Field(path, "owner"));
  mech.num_actions = game.NumActions(mech.owner);
  const int num_profiles = game.NumTypeProfiles();
  mech.probs.assign(static_cast<size_t>(num_profiles) * mech.num_actions, 0.0);
  std::vector<bool> seen(num_profiles, false);
  const Json& rows = RequireArray(doc, "rows", path);
  for (size_t e = 0; e < rows.size(); ++e) {
    const std::string row_path = Index(Field(path, "rows"), e);
    const int x = ParseTypeProfile(game, Require(rows[e], "profile", row_path),
                                   Field(row_path, "profile"));
    if (seen[x]) throw InputError(row_path + ": duplicate profile");
    seen[x] = true;
    const auto dist =
        AsNumbers(Require(rows[e], "dist", row_path), Field(row_path, "dist"));
    if (static_cast<int>(dist.size()) != mech.num_actions) {
      throw InputError(Field(row_path, "dist") + ": expected " +
                       std::to_string(mech.num_actions) + " probabilities");
    }
    std::copy(dist.begin(), dist.end(), mech.probs.begin() +
                                            static_cast<size_t>(x) * mech.num_actions);
  }
  for (int x = 0; x < num_profiles; ++x) {
    if (!seen[x]) {
      throw InputError(Field(path, "rows") + ": missing profile " +
                       TypeProfileJson(game, x).dump());
    }
  }
  try {
    CheckDirectMechanism(game, mech.owner, mech);
  } catch (const InputError& e) {
    throw InputError(Field(path, "rows") + ": " + e.what());
  }
  return mech;
}

Json DirectMechanismToJson(const FiniteGame& game, const DirectMechanism& mech) {
  Json rows = Json::array();
  for (int x = 0; x < mech.NumProfiles(); ++x) {
    const auto row = mech.Row(x);
    rows.push_back({{"profile", TypeProfileJson(game, x)},
                    {"dist", std::vector<double>(row.begin(), row.end())}});
  }
  return {{"owner", game.principal_ids[mech.owner]}, {"rows", rows}};
}

MechanismProfile ParseProfile(const FiniteGame& game, const Json& doc) {
  const Json& mechs = RequireArray(doc, "mechanisms", "");
  MechanismProfile profile(game.NumPrincipals());
  std::vector<bool> seen(game.NumPrincipals(), false);
  for (size_t e = 0; e < mechs.size(); ++e) {
    DirectMechanism mech =
        ParseDirectMechanism(game, mechs[e], Index("mechanisms", e));
    if (seen[mech.owner]) {
      throw InputError(Index("mechanisms", e) + ": duplicate owner");
    }
    seen[mech.owner] = true;
    profile[mech.owner] = std::move(mech);
  }
  for (int j = 0; j < game.NumPrincipals(); ++j) {
    if (!seen[j]) {
      throw InputError("mechanisms: missing principal " + game.principal_ids[j]);
    }
  }
  return profile;
}

Json ProfileToJson(const FiniteGame& game, const MechanismProfile& profile) {
  Json mechs = Json::array();
  for (const auto& mech : profile) {
    mechs.push_back(DirectMechanismToJson(game, mech));
  }
  return {{"mechanisms", mechs}};
}

GeneralMechanism ParseGeneralMechanism(const FiniteGame& game, const Json& doc,
                                       const std::string& path) {
  GeneralMechanism mech;
  mech.owner = ParsePrincipal(game, Require(doc, "owner", path),
                              Field(path, "owner"));
  mech.num_actions = game.NumActions(mech.owner);
  const std::string sets_path = Field(path, "message_sets");
  const Json& sets = Require(doc, "message_sets", path);
  mech.principal_messages = AsLabels(Require(sets, "principal", sets_path),
                                     Field(sets_path, "principal"));
  CheckUnique(mech.principal_messages, Field(sets_path, "principal"));
  if (mech.principal_messages.empty()) {
    throw InputError(Field(sets_path, "principal") + ": empty message set");
  }
  const Json& agents = RequireArray(sets, "agents", sets_path);
  if (static_cast<int>(agents.size()) != game.NumAgents()) {
    throw InputError(Field(sets_path, "agents") +
                     ": expected one message set per agent");
  }
  for (size_t i = 0; i < agents.size(); ++i) {
    const std::string p = Index(Field(sets_path, "agents"), i);
    mech.agent_messages.push_back(AsLabels(agents[i], p));
    CheckUnique(mech.agent_messages.back(), p);
    if (mech.agent_messages.back().empty()) {
      throw InputError(p + ": empty message set");
    }
  }
  const int profiles = mech.NumMessageProfiles();
  const MixedRadix space = mech.MessageSpace();
  mech.outcome.assign(static_cast<size_t>(mech.NumPrincipalMessages()) *
                          profiles * mech.num_actions,
                      0.0);
  std::vector<bool> seen(static_cast<size_t>(mech.NumPrincipalMessages()) *
                             profiles,
                         false);
  const Json& rows = RequireArray(doc, "outcome_rows", path);
  for (size_t e = 0; e < rows.size(); ++e) {
    const std::string row_path = Index(Field(path, "outcome_rows"), e);
    const auto labels =
        AsLabels(Require(rows[e], "m", row_path), Field(row_path, "m"));
    if (static_cast<int>(labels.size()) != game.NumAgents() + 1) {
      throw InputError(Field(row_path, "m") +
                       ": expected the principal message then one per agent");
    }
    const int m0 = Lookup(mech.principal_messages, labels[0],
                          Field(row_path, "m"), "principal message");
    std::vector<int> digits;
    for (int i = 0; i < game.NumAgents(); ++i) {
      digits.push_back(Lookup(mech.agent_messages[i], labels[i + 1],
                              Field(row_path, "m"), "agent message"));
    }
    const size_t slot = static_cast<size_t>(m0) * profiles + space.Encode(digits);
    if (seen[slot]) throw InputError(row_path + ": duplicate message profile");
    seen[slot] = true;
    const auto dist =
        AsNumbers(Require(rows[e], "dist", row_path), Field(row_path, "dist"));
    if (static_cast<int>(dist.size()) != mech.num_actions) {
      throw InputError(Field(row_path, "dist") + ": expected " +
                       std::to_string(mech.num_actions) + " probabilities");
    }
    std::copy(dist.begin(), dist.end(),
              mech.outcome.begin() + slot * mech.num_actions);
  }
  for (size_t slot = 0; slot < seen.size(); ++slot) {
    if (!seen[slot]) {
      throw InputError(Field(path, "outcome_rows") +
                       ": missing row for message profile " +
                       std::to_string(slot));
    }
  }
  if (doc.contains("standard")) {
    if (!doc["standard"].is_boolean()) {
      throw InputError(Field(path, "standard") + ": expected a boolean");
    }
    mech.standard = doc["standard"].get<bool>();
  } else {
    mech.standard = mech.OutcomeIgnoresPrincipalMessage();
  }
  try {
    CheckGeneralMechanism(game, mech, 1e-9);
  } catch (const InputError& e) {
    throw InputError((path.empty() ? std::string("mechanism") : path) + ": " +
                     e.what());
  }
  return mech;
}

Json GeneralMechanismToJson(const FiniteGame& game,
                            const GeneralMechanism& mech) {
  const MixedRadix space = mech.MessageSpace();
  Json rows = Json::array();
  for (int m0 = 0; m0 < mech.NumPrincipalMessages(); ++m0) {
    for (int m = 0; m < space.Size(); ++m) {
      Json labels = Json::array({mech.principal_messages[m0]});
      for (int i = 0; i < space.NumDigits(); ++i) {
        labels.push_back(mech.agent_messages[i][space.Digit(m, i)]);
      }
      const auto row = mech.Outcome(m0, m);
      rows.push_back({{"m", labels},
                      {"dist", std::vector<double>(row.begin(), row.end())}});
    }
  }
  return {{"owner", game.principal_ids[mech.owner]},
          {"message_sets",
           {{"principal", mech.principal_messages},
            {"agents", mech.agent_messages}}},
          {"outcome_rows", rows},
          {"standard", mech.standard}};
}

std::string MechanismProfileHash(const FiniteGame& game,
                                 const std::vector<GeneralMechanism>& mechs) {
  Json all = Json::array();
  for (const auto& mech : mechs) all.push_back(GeneralMechanismToJson(game, mech));
  return HexDigest(Fnv1a64(all.dump()));
}

ContinuationStrategies ParseStrategies(
    const FiniteGame& game, const std::vector<GeneralMechanism>& mechs,
    const Json& doc) {
  const int num_principals = game.NumPrincipals();
  if (doc.contains("mechanism_profile_hash")) {
    const std::string expected = MechanismProfileHash(game, mechs);
    const std::string given = AsLabel(doc["mechanism_profile_hash"],
                                      "strategies.mechanism_profile_hash");
    if (given != expected) {
      throw InputError("strategies.mechanism_profile_hash: " + given +
                       " does not match the mechanisms (" + expected + ")");
    }
  }
  ContinuationStrategies s;
  s.principal.assign(num_principals, {});
  if (doc.contains("principals")) {
    const Json& rows = RequireArray(doc, "principals", "strategies");
    for (size_t e = 0; e < rows.size(); ++e) {
      const std::string path = Index("strategies.principals", e);
      const int k = ParsePrincipal(game, Require(rows[e], "principal", path),
                                   Field(path, "principal"));
      if (!s.principal[k].empty()) throw InputError(path + ": duplicate entry");
      s.principal[k] =
          AsNumbers(Require(rows[e], "dist", path), Field(path, "dist"));
    }
  }
  for (int k = 0; k < num_principals; ++k) {
    if (s.principal[k].empty()) {
      if (mechs[k].NumPrincipalMessages() != 1) {
        throw InputError("strategies.principals: missing entry for principal " +
                         game.principal_ids[k]);
      }
      s.principal[k] = {1.0};
    }
  }
  s.agent.resize(game.NumAgents());
  for (int i = 0; i < game.NumAgents(); ++i) {
    s.agent[i].resize(num_principals);
    for (int k = 0; k < num_principals; ++k) {
      s.agent[i][k].resize(game.NumTypes(i));
    }
  }
  const Json& rows = RequireArray(doc, "agents", "strategies");
  for (size_t e = 0; e < rows.size(); ++e) {
    const std::string path = Index("strategies.agents", e);
    const int i = ParseAgent(game, Require(rows[e], "agent", path),
                             Field(path, "agent"));
    const int k = ParsePrincipal(game, Require(rows[e], "principal", path),
                                 Field(path, "principal"));
    const int t = Lookup(game.type_labels[i],
                         AsLabel(Require(rows[e], "type", path),
                                 Field(path, "type")),
                         Field(path, "type"), "type");
    if (!s.agent[i][k][t].empty()) throw InputError(path + ": duplicate entry");
    s.agent[i][k][t] =
        AsNumbers(Require(rows[e], "dist", path), Field(path, "dist"));
  }
  for (int i = 0; i < game.NumAgents(); ++i) {
    for (int k = 0; k < num_principals; ++k) {
      for (int t = 0; t < game.NumTypes(i); ++t) {
        if (s.agent[i][k][t].empty()) {
          throw InputError("strategies.agents: missing entry for agent " +
                           game.agent_ids[i] + ", principal " +
                           game.principal_ids[k] + ", type " +
                           game.type_labels[i][t]);
        }
      }
    }
  }
  try {
    CheckStrategies(game, mechs, s);
  } catch (const InputError& e) {
    throw InputError(std::string("strategies: ") + e.what());
  }
  return s;
}

Json StrategiesToJson(const FiniteGame& game,
                      const std::vector<GeneralMechanism>& mechs,
                      const ContinuationStrategies& s) {
  Json principals = Json::array();
  for (int k = 0; k < game.NumPrincipals(); ++k) {
    principals.push_back(
        {{"principal", game.principal_ids[k]}, {"dist", s.principal[k]}});
  }
  Json agents = Json::array();
  for (int i = 0; i < game.NumAgents(); ++i) {
    for (int k = 0; k < game.NumPrincipals(); ++k) {
      for (int t = 0; t < game.NumTypes(i); ++t) {
        agents.push_back({{"agent", game.agent_ids[i]},
                          {"principal", game.principal_ids[k]},
                          {"type", game.type_labels[i][t]},
                          {"dist", s.agent[i][k][t]}});
      }
    }
  }
  return {{"mechanism_profile_hash", MechanismProfileHash(game, mechs)},
          {"principals", principals},
          {"agents", agents}};
}

EquilibriumCandidate ParseCandidate(const FiniteGame& game, const Json& doc) {
  EquilibriumCandidate candidate;
  const Json& mechs = RequireArray(doc, "mechanisms", "");
  candidate.mechanisms.resize(game.NumPrincipals());
  std::vector<bool> seen(game.NumPrincipals(), false);
  for (size_t e = 0; e < mechs.size(); ++e) {
    GeneralMechanism mech =
        ParseGeneralMechanism(game, mechs[e], Index("mechanisms", e));
    if (seen[mech.owner]) throw InputError(Index("mechanisms", e) + ": duplicate owner");
    seen[mech.owner] = true;
    candidate.mechanisms[mech.owner] = std::move(mech);
  }
  for (int j = 0; j < game.NumPrincipals(); ++j) {
    if (!seen[j]) {
      throw InputError("mechanisms: missing principal " + game.principal_ids[j]);
    }
  }
  candidate.on_path = ParseStrategies(game, candidate.mechanisms,
                                      Require(doc, "strategies", ""));
  candidate.deviations.assign(game.NumPrincipals(), {});
  if (doc.contains("deviations")) {
    const Json& rows = RequireArray(doc, "deviations", "");
    for (size_t e = 0; e < rows.size(); ++e) {
      const std::string path = Index("deviations", e);
      const int j = ParsePrincipal(game, Require(rows[e], "principal", path),
                                   Field(path, "principal"));
      const Json& list = RequireArray(rows[e], "mechanisms", path);
      for (size_t d = 0; d < list.size(); ++d) {
        GeneralMechanism mech = ParseGeneralMechanism(
            game, list[d], Index(Field(path, "mechanisms"), d));
        if (mech.owner != j) {
          throw InputError(Index(Field(path, "mechanisms"), d) +
                           ": owner differs from the deviating principal");
        }
        candidate.deviations[j].push_back(std::move(mech));
      }
    }
  }
  return candidate;
}

Json CandidateToJson(const FiniteGame& game,
                     const EquilibriumCandidate& candidate) {
  Json mechs = Json::array();
  for (const auto& mech : candidate.mechanisms) {
    mechs.push_back(GeneralMechanismToJson(game, mech));
  }
  Json deviations = Json::array();
  for (size_t j = 0; j < candidate.deviations.size(); ++j) {
    Json list = Json::array();
    for (const auto& mech : candidate.deviations[j]) {
      list.push_back(GeneralMechanismToJson(game, mech));
    }
    deviations.push_back(
        {{"principal", game.principal_ids[j]}, {"mechanisms", list}});
  }
  return {{"mechanisms", mechs},
          {"strategies",
           StrategiesToJson(game, candidate.mechanisms, candidate.on_path)},
          {"deviations", deviations}};
}

Json CertificateToJson(const FiniteGame& game, const ValueCertificate& cert) {
  return {{"principal", game.principal_ids[cert.principal]},
          {"kind", ToString(cert.kind)},
          {"value", cert.value},
          {"gap_bound", cert.gap_bound},
          {"witness", ProfileToJson(game, cert.witness)["mechanisms"]},
          {"witness_value", cert.witness_value}};
}

}  // namespace mechpoly
