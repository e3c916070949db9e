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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mechpoly/bic.h"
#include "mechpoly/errors.h"
#include "mechpoly/game.h"
#include "mechpoly/game_families.h"
#include "mechpoly/mechanisms.h"
#include "mechpoly/solver.h"
#include "test_support.h"

namespace mechpoly {
namespace {

using testing::SmallSpec;
using testing::UniformProfile;

PureContinuation Truthful(const FiniteGame& g) {
  PureContinuation c;
  c.principal.assign(g.NumPrincipals(), 0);
  c.agent.resize(g.NumAgents());
  for (int i = 0; i < g.NumAgents(); ++i) {
    std::vector<int> id(g.NumTypes(i));
    for (int t = 0; t < g.NumTypes(i); ++t) id[t] = t;
    c.agent[i].assign(g.NumPrincipals(), id);
  }
  return c;
}

std::vector<GeneralMechanism> Standard(const FiniteGame& g,
                                       const MechanismProfile& p) {
  std::vector<GeneralMechanism> out;
  for (const auto& pi : p) out.push_back(StandardDirectMechanism(g, pi));
  return out;
}

DirectMechanism Pure(int j, int actions, const std::vector<int>& choice) {
  DirectMechanism m;
  m.owner = j;
  m.num_actions = actions;
  m.probs.assign(choice.size() * actions, 0.0);
  for (size_t x = 0; x < choice.size(); ++x) m.At(x, choice[x]) = 1.0;
  return m;
}

std::vector<double> Point(int actions, int a) {
  std::vector<double> p(actions, 0.0);
  p[a] = 1.0;
  return p;
}

bool Contains(const std::vector<std::vector<double>>& set,
              std::span<const double> dist) {
  return std::any_of(set.begin(), set.end(), [&](const auto& member) {
    return std::equal(member.begin(), member.end(), dist.begin(), dist.end());
  });
}

SetValuedContract RandomContract(std::uint64_t seed) {
  Rng rng(seed);
  SetValuedContract h;
  h.owner = 0;
  h.num_actions = 2 + rng.Below(2);
  const int agents = 1 + rng.Below(3);
  for (int i = 0; i < agents; ++i) {
    const int count = 1 + rng.Below(3);
    std::vector<std::string> labels;
    for (int m = 0; m < count; ++m) labels.push_back("m" + std::to_string(m));
    h.agent_messages.push_back(labels);
  }
  // A few distinct image sets, reused across message profiles.
  std::vector<std::vector<std::vector<double>>> pool;
  const int pool_size = 1 + rng.Below(3);
  for (int s = 0; s < pool_size; ++s) {
    std::vector<std::vector<double>> set;
    const int members = 1 + rng.Below(4);
    for (int e = 0; e < members; ++e) {
      set.push_back(rng.Below(2) == 0 ? Point(h.num_actions,
                                              rng.Below(h.num_actions))
                                      : rng.Simplex(h.num_actions));
    }
    pool.push_back(set);
  }
  for (int m = 0; m < h.MessageSpace().Size(); ++m) {
    h.sets.push_back(pool[rng.Below(pool_size)]);
  }
  return h;
}

TEST_CASE("induced direct mechanisms") {
  const FiniteGame g = MakeRandomGame(SmallSpec(2, 2), 4);
  Rng rng(4);
  const MechanismProfile p = testing::RandomProfile(g, rng);
  const auto mechs = Standard(g, p);

  SUBCASE("standard mechanism with truthful reports is the identity") {
    const auto induced = InduceProfile(g, mechs, ToMixed(g, mechs, Truthful(g)));
    for (int j = 0; j < 2; ++j) {
      for (size_t n = 0; n < p[j].probs.size(); ++n) {
        CHECK(induced[j].probs[n] == doctest::Approx(p[j].probs[n]));
      }
    }
  }
  SUBCASE("fixed messages give a constant mechanism") {
    PureContinuation c = Truthful(g);
    for (auto& per_agent : c.agent) {
      for (auto& map : per_agent) std::fill(map.begin(), map.end(), 0);
    }
    const DirectMechanism m =
        InduceDirectMechanism(g, mechs[0], ToMixed(g, mechs, c));
    for (int x = 0; x < g.NumTypeProfiles(); ++x) {
      for (int a = 0; a < g.NumActions(0); ++a) {
        CHECK(m.At(x, a) == doctest::Approx(p[0].At(0, a)));
      }
    }
  }
  SUBCASE("mixing over two messages averages their outcomes") {
    const FiniteGame one = MakeZeroGame({1}, {2, 2});
    GeneralMechanism gamma;
    gamma.owner = 0;
    gamma.num_actions = 2;
    gamma.principal_messages = {"-"};
    gamma.agent_messages = {{"left", "right"}};
    gamma.outcome = {1, 0, 0, 1};
    const std::vector<GeneralMechanism> both = {
        gamma, StandardDirectMechanism(one, UniformProfile(one)[1])};
    ContinuationStrategies s;
    s.principal = {{1.0}, {1.0}};
    s.agent = {{{{0.5, 0.5}}, {{1.0}}}};
    const DirectMechanism m = InduceDirectMechanism(one, gamma, s);
    CHECK(m.At(0, 0) == doctest::Approx(0.5));
    CHECK(m.At(0, 1) == doctest::Approx(0.5));
  }
}

TEST_CASE("nesting set-valued contracts") {
  SUBCASE("constant singleton image") {
    SetValuedContract h;
    h.num_actions = 2;
    h.agent_messages = {{"m0", "m1"}};
    h.sets = {{Point(2, 0)}, {Point(2, 0)}};
    const NestedContract n = NestSzentesContract(h);
    CHECK(n.mechanism.NumPrincipalMessages() == 1);
    CHECK(n.mechanism.standard);
    for (int m = 0; m < 2; ++m) CHECK(n.mechanism.Outcome(0, m)[0] == 1.0);
  }
  SUBCASE("one two-point image") {
    SetValuedContract h;
    h.num_actions = 2;
    h.agent_messages = {{"m"}};
    h.sets = {{Point(2, 0), Point(2, 1)}};
    const NestedContract n = NestSzentesContract(h);
    REQUIRE(n.mechanism.NumPrincipalMessages() == 2);
    // Members are stored sorted; together the selections reach both.
    CHECK(n.mechanism.Outcome(0, 0)[0] + n.mechanism.Outcome(1, 0)[0] == 1.0);
    CHECK(n.mechanism.Outcome(0, 0)[1] + n.mechanism.Outcome(1, 0)[1] == 1.0);
    CHECK_FALSE(n.mechanism.standard);
    CHECK(NestSzentesContract(h, {1}).selected_message == 1);
  }
  SUBCASE("two images, one with two points") {
    SetValuedContract h;
    h.num_actions = 2;
    h.agent_messages = {{"m0", "m1"}};
    h.sets = {{Point(2, 0), Point(2, 1)}, {Point(2, 1)}};
    const NestedContract n = NestSzentesContract(h);
    CHECK(n.image_sets.size() == 2);
    CHECK(n.mechanism.NumPrincipalMessages() == 2);
    for (int s = 0; s < 2; ++s) {
      for (int m = 0; m < 2; ++m) {
        CHECK(Contains(h.sets[m], n.mechanism.Outcome(s, m)));
      }
    }
  }
  SUBCASE("selection space cap") {
    SetValuedContract h;
    h.num_actions = 2;
    h.agent_messages = {{"a", "b", "c", "d", "e", "f", "g"}};
    for (int m = 0; m < 7; ++m) {
      std::vector<std::vector<double>> set;
      for (int e = 0; e < 8; ++e) set.push_back({e / 8.0 + m / 100.0, 0});
      for (auto& d : set) d[1] = 1.0 - d[0];
      h.sets.push_back(set);
    }
    CHECK_THROWS_AS(NestSzentesContract(h), SelectionSpaceTooLarge);
  }
}

TEST_CASE("property: nested outcomes stay in their image sets") {
  int bad = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const SetValuedContract h = RandomContract(s);
    const NestedContract n = NestSzentesContract(h);
    const int profiles = h.MessageSpace().Size();
    for (int m0 = 0; m0 < n.mechanism.NumPrincipalMessages(); ++m0) {
      for (int m = 0; m < profiles; ++m) {
        if (!Contains(h.sets[m], n.mechanism.Outcome(m0, m))) ++bad;
      }
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("type-and-DM mechanisms") {
  const FiniteGame g = MakeScreening();
  const DirectMechanism truthful = Pure(0, 2, {0, 1});
  const DirectMechanism always_b = Pure(0, 2, {1, 1});

  SUBCASE("single constant entry") {
    const auto mech = BuildTypeAndDmMechanism(g, 0, {always_b});
    CHECK(mech.standard);
    for (int m = 0; m < mech.NumMessageProfiles(); ++m) {
      CHECK(mech.Outcome(0, m)[1] == 1.0);
    }
  }
  SUBCASE("truthful reports reproduce the menu entry") {
    const auto mech = BuildTypeAndDmMechanism(g, 0, {truthful});
    for (int x = 0; x < 2; ++x) {
      CHECK(mech.Outcome(0, x)[0] == truthful.At(x, 0));
    }
  }
  SUBCASE("principal message selects the entry") {
    const auto mech = BuildTypeAndDmMechanism(g, 0, {truthful, always_b});
    CHECK_FALSE(mech.standard);
    for (int x = 0; x < 2; ++x) CHECK(mech.Outcome(1, x)[1] == 1.0);
  }
  SUBCASE("non-BIC entries are refused") {
    CHECK_THROWS_AS(BuildTypeAndDmMechanism(g, 0, {Pure(0, 2, {1, 0})}),
                    MenuEntryNotBic);
  }
  SUBCASE("argmax menu with truthful agents is a continuation equilibrium") {
    MechanismProfile p = {truthful, DirectMechanism::Degenerate(1, 2, 1, 0)};
    const BestResponse br = ComputeBestResponse(g, 0, p);
    std::vector<GeneralMechanism> mechs = Standard(g, p);
    mechs[0] = BuildTypeAndDmMechanism(g, 0, {br.mechanism});
    CHECK(CheckContinuationEquilibrium(g, mechs,
                                       ToMixed(g, mechs, Truthful(g)))
              .ok);
  }
}

TEST_CASE("deviator branch rule") {
  SUBCASE("examples") {
    const int unanimous[] = {0, 0, 0};
    CHECK(DeviatorBranch(0, unanimous) == 0);
    const int majority[] = {1, 1, 0};
    CHECK(DeviatorBranch(0, majority) == 1);
    const int split[] = {1, 2, 0};
    CHECK(DeviatorBranch(0, split) == 0);
    const int tie[] = {1, 1, 2, 2};
    CHECK(DeviatorBranch(0, tie) == 0);
  }
  SUBCASE("exhaustive against a direct count") {
    for (int agents : {3, 4}) {
      const MixedRadix reports(std::vector<int>(agents, 3));
      for (int k = 0; k < 3; ++k) {
        for (int r = 0; r < reports.Size(); ++r) {
          const auto named = reports.Decode(r);
          int expected = k;
          for (int j = 0; j < 3; ++j) {
            const auto count = std::count(named.begin(), named.end(), j);
            if (j != k && 2 * count > agents) expected = j;
          }
          CHECK(DeviatorBranch(k, named) == expected);
        }
      }
    }
  }
  SUBCASE("one dissenter cannot move unanimity") {
    for (int agents = 3; agents <= 6; ++agents) {
      for (int k = 0; k < 3; ++k) {
        for (int u = 0; u < 3; ++u) {
          for (int i = 0; i < agents; ++i) {
            for (int flip = 0; flip < 3; ++flip) {
              std::vector<int> named(agents, u);
              const int before = DeviatorBranch(k, named);
              named[i] = flip;
              CHECK(DeviatorBranch(k, named) == before);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("deviator-reporting mechanisms") {
  const FiniteGame g = MakeRandomGame(SmallSpec(2, 3), 21);
  const BicPolytope p0 = BuildBicPolytope(g, 0);
  const DirectMechanism star = SampleBic(p0, 1);
  const DirectMechanism punish = SampleBic(p0, 2);
  const GeneralMechanism mech = BuildDeviatorReporting(g, 0, star, {star, punish});
  CHECK(mech.standard);
  CHECK(mech.OutcomeIgnoresPrincipalMessage());

  const MixedRadix types = g.TypeSpace();
  const MixedRadix messages = mech.MessageSpace();
  auto encode = [&](const std::vector<int>& named, int x) {
    std::vector<int> digits(g.NumAgents());
    for (int i = 0; i < g.NumAgents(); ++i) {
      digits[i] = named[i] * g.NumTypes(i) + types.Digit(x, i);
    }
    return messages.Encode(digits);
  };
  for (int x = 0; x < g.NumTypeProfiles(); ++x) {
    const auto on = mech.Outcome(0, encode({0, 0, 0}, x));
    const auto off = mech.Outcome(0, encode({1, 1, 0}, x));
    const auto one = mech.Outcome(0, encode({1, 0, 0}, x));
    for (int a = 0; a < g.NumActions(0); ++a) {
      CHECK(on[a] == star.At(x, a));
      CHECK(off[a] == punish.At(x, a));
      CHECK(one[a] == star.At(x, a));
    }
  }
  const FiniteGame two = MakeRandomGame(SmallSpec(2, 2), 3);
  const DirectMechanism c = SampleBic(BuildBicPolytope(two, 0), 0);
  CHECK_THROWS_AS(BuildDeviatorReporting(two, 0, c, {c, c}), TooFewAgents);
}

TEST_CASE("continuation equilibrium checks") {
  SUBCASE("misreporting screening type gains one") {
    const FiniteGame g = MakeScreening();
    const MechanismProfile p = {Pure(0, 2, {1, 0}),
                                DirectMechanism::Degenerate(1, 2, 1, 0)};
    const auto mechs = Standard(g, p);
    const auto v = CheckContinuationEquilibrium(
        g, mechs, ToMixed(g, mechs, Truthful(g)));
    CHECK_FALSE(v.ok);
    CHECK(v.worst.kind == DeviationKind::kAgent);
    CHECK(v.worst.player == 0);
    CHECK(v.worst.type == 0);
    CHECK(v.worst.gain == doctest::Approx(1.0));
  }
  SUBCASE("deviator-reporting support is an equilibrium on path") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const FiniteGame g = MakeRandomGame(SmallSpec(2, 3), s);
      MechanismProfile target, pun0, pun1;
      for (int j = 0; j < 2; ++j) {
        const BicPolytope poly = BuildBicPolytope(g, j);
        target.push_back(SampleBic(poly, DeriveSeed(s, j)));
        pun0.push_back(SampleBic(poly, DeriveSeed(s, 10 + j)));
        pun1.push_back(SampleBic(poly, DeriveSeed(s, 20 + j)));
      }
      const auto cand = BuildRobustSupport(g, target, {pun0, pun1});
      CHECK(CheckContinuationEquilibrium(g, cand.mechanisms, cand.on_path).ok);
      const auto induced = InduceProfile(g, cand.mechanisms, cand.on_path);
      for (int j = 0; j < 2; ++j) CHECK(induced[j] == target[j]);
    }
  }
}

TEST_CASE("property: equilibrium play induces BIC mechanisms") {
  int equilibria = 0;
  for (std::uint64_t s = 0; s < 30; ++s) {
    const FiniteGame g = MakeRandomGame(SmallSpec(2, 1 + s % 2), s);
    std::vector<GeneralMechanism> mechs;
    for (int j = 0; j < 2; ++j) {
      mechs.push_back(RandomGeneralMechanism(g, j, 2, DeriveSeed(s, j)));
    }
    for (const auto& c : EnumeratePureContinuationEquilibria(g, mechs)) {
      const auto mixed = ToMixed(g, mechs, c);
      REQUIRE(CheckContinuationEquilibrium(g, mechs, mixed).ok);
      for (int j = 0; j < 2; ++j) {
        CHECK(IsIndividuallyBic(g, j, InduceDirectMechanism(g, mechs[j], mixed),
                                1e-8)
                  .ok);
      }
      ++equilibria;
    }
  }
  CHECK(equilibria > 20);
}

EquilibriumCandidate MatchingPenniesSupport(const FiniteGame& g,
                                            const MechanismProfile& target) {
  SolverParams params;
  std::vector<MechanismProfile> punishments;
  for (int j = 0; j < 2; ++j) {
    punishments.push_back(
        PunishmentProfile(g, j, MinmaxMode::kExact2, params).profile);
  }
  return BuildRobustSupport(g, target, punishments);
}

TEST_CASE("equilibrium notions on matching pennies") {
  const FiniteGame g = MakeMatchingPennies();

  SUBCASE("no deviations") {
    EquilibriumCandidate cand = MatchingPenniesSupport(g, UniformProfile(g));
    for (int j = 0; j < 2; ++j) cand.deviations[j] = {cand.mechanisms[j]};
    for (auto n : {EquilibriumNotion::kPbe, EquilibriumNotion::kRobust,
                   EquilibriumNotion::kStronglyRobust}) {
      CHECK(CheckEquilibriumNotion(g, cand, n).status == NotionStatus::kTrue);
    }
    cand.deviations[0].clear();
    CHECK_THROWS_AS(CheckEquilibriumNotion(g, cand, EquilibriumNotion::kPbe),
                    DeviationSetEmpty);
  }
  SUBCASE("uniform coins supported against type-and-DM deviations") {
    EquilibriumCandidate cand = MatchingPenniesSupport(g, UniformProfile(g));
    for (int j = 0; j < 2; ++j) {
      const auto vertices = EnumerateVertices(BuildBicPolytope(g, j));
      cand.deviations[j] = {BuildTypeAndDmMechanism(g, j, vertices),
                            BuildTypeAndDmMechanism(g, j, {vertices[0]})};
    }
    const auto v = CheckEquilibriumNotion(g, cand, EquilibriumNotion::kRobust);
    CHECK(v.status == NotionStatus::kTrue);
    CHECK(v.equilibrium_payoffs[0] == doctest::Approx(0.5));
  }
  SUBCASE("paying principal 1 below its minmax is rejected") {
    const MechanismProfile p = {DirectMechanism::Degenerate(0, 1, 2, 0),
                                DirectMechanism::Degenerate(1, 1, 2, 1)};
    EquilibriumCandidate cand;
    cand.mechanisms = Standard(g, p);
    cand.on_path = ToMixed(g, cand.mechanisms, Truthful(g));
    cand.deviations = {
        {BuildTypeAndDmMechanism(g, 0,
                                 EnumerateVertices(BuildBicPolytope(g, 0)))},
        {cand.mechanisms[1]}};
    const auto v = CheckEquilibriumNotion(g, cand, EquilibriumNotion::kRobust);
    CHECK(v.status == NotionStatus::kFalse);
    REQUIRE(v.worst.has_value());
    CHECK(v.worst->principal == 0);
  }
}

TEST_CASE("property: strongly robust implies robust implies pbe") {
  int checked = 0;
  for (std::uint64_t s = 0; s < 25; ++s) {
    const FiniteGame g = MakeRandomGame(SmallSpec(2, 3), s);
    MechanismProfile target;
    for (int j = 0; j < 2; ++j) {
      target.push_back(SampleBic(BuildBicPolytope(g, j), DeriveSeed(s, j)));
    }
    SolverParams params;
    std::vector<MechanismProfile> punishments;
    for (int j = 0; j < 2; ++j) {
      punishments.push_back(
          PunishmentProfile(g, j, MinmaxMode::kExact2, params).profile);
    }
    EquilibriumCandidate cand = BuildRobustSupport(g, target, punishments);
    for (int j = 0; j < 2; ++j) {
      for (int r = 0; r < 3; ++r) {
        cand.deviations[j].push_back(
            RandomGeneralMechanism(g, j, 2, DeriveSeed(s, 100 * j + r)));
      }
    }
    auto ok = [&](EquilibriumNotion n) {
      return CheckEquilibriumNotion(g, cand, n).status == NotionStatus::kTrue;
    };
    const bool strong = ok(EquilibriumNotion::kStronglyRobust);
    const bool robust = ok(EquilibriumNotion::kRobust);
    const bool pbe = ok(EquilibriumNotion::kPbe);
    CHECK((!strong || robust));
    CHECK((!robust || pbe));
    ++checked;
  }
  CHECK(checked == 25);
}

TEST_CASE("simulation") {
  SUBCASE("same seed, same report") {
    const FiniteGame g = MakeMatchingPennies();
    const auto mechs = Standard(g, UniformProfile(g));
    const auto s = ToMixed(g, mechs, Truthful(g));
    const auto a = Simulate(g, mechs, s, 7, 5000);
    const auto b = Simulate(g, mechs, s, 7, 5000);
    CHECK(a.principal_mean == b.principal_mean);
    CHECK(a.action_frequency == b.action_frequency);
    CHECK(std::abs(a.principal_mean[0] - 0.5) <= 3 * a.principal_stderr[0]);
  }
  SUBCASE("degenerate prior and pure play has no variance") {
    FiniteGame g = MakeRandomGame(SmallSpec(2, 2), 8);
    std::fill(g.prior.begin(), g.prior.end(), 0.0);
    g.prior.back() = 1.0;
    MechanismProfile p;
    for (int j = 0; j < 2; ++j) {
      p.push_back(DirectMechanism::Degenerate(j, g.NumTypeProfiles(),
                                              g.NumActions(j), 1));
    }
    const auto mechs = Standard(g, p);
    const auto r = Simulate(g, mechs, ToMixed(g, mechs, Truthful(g)), 1, 200);
    for (int j = 0; j < 2; ++j) {
      CHECK(r.principal_stderr[j] == 0.0);
      CHECK(r.principal_mean[j] == doctest::Approx(r.principal_analytic[j]));
    }
  }
}

}  // namespace
}  // namespace mechpoly
