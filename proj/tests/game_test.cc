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

#include <cmath>
#include <vector>

#include "mechpoly/errors.h"
#include "mechpoly/game.h"
#include "mechpoly/game_families.h"
#include "test_support.h"

namespace mechpoly {
namespace {

using testing::RandomProfile;
using testing::SmallSpec;
using testing::UniformProfile;

// Brute force over (x, a) with the product of mechanism rows.
double NaivePrincipalPayoff(const FiniteGame& g, int j,
                            const MechanismProfile& pi) {
  const MixedRadix actions = g.ActionSpace();
  double total = 0.0;
  for (int x = 0; x < g.NumTypeProfiles(); ++x) {
    for (int a = 0; a < actions.Size(); ++a) {
      double p = g.prior[x];
      for (int k = 0; k < g.NumPrincipals(); ++k) {
        p *= pi[k].At(x, actions.Digit(a, k));
      }
      total += p * g.PrincipalPayoff(j, a, x);
    }
  }
  return total;
}

FiniteGame CorrelatedTwoByTwo() {
  FiniteGame g = MakeZeroGame({2, 2}, {2, 2});
  g.prior = {0.4, 0.1, 0.1, 0.4};
  return g;
}

TEST_CASE("validation accepts the built-in games") {
  CHECK(ValidateGame(MakeMatchingPennies()).ok());
  CHECK(ValidateGame(MakeScreening()).ok());
  CHECK(ValidateGame(MakeGap3Instance(7)).ok());
  CHECK(ValidateGame(MakeZeroGame({2, 1, 3}, {2, 2})).ok());
}

TEST_CASE("validation reports prior mass and principal count") {
  FiniteGame g = MakeZeroGame({2}, {2, 2});
  g.prior = {0.5, 0.49};
  auto v = ValidateGame(g);
  REQUIRE_FALSE(v.ok());
  CHECK(v.violations.front().find("prior mass 0.99") != std::string::npos);

  FiniteGame one = MakeZeroGame({1}, {2});
  v = ValidateGame(one);
  REQUIRE_FALSE(v.ok());
  CHECK(v.violations.front().find("J >= 2") != std::string::npos);
}

TEST_CASE("zero-mass types are warnings, not violations") {
  FiniteGame g = MakeZeroGame({2}, {2, 2});
  g.prior = {1.0, 0.0};
  const auto v = ValidateGame(g);
  CHECK(v.ok());
  CHECK(v.warnings.size() == 1);
}

TEST_CASE("conditional prior") {
  SUBCASE("independent uniform") {
    const FiniteGame g = MakeZeroGame({2, 2}, {2, 2});
    const auto c = ConditionalPrior(g, 0, 0);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c[1] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("correlated, Bayes rule by hand") {
    const auto c = ConditionalPrior(CorrelatedTwoByTwo(), 0, 0);
    CHECK(c[0] == doctest::Approx(0.4 / 0.5).epsilon(1e-14));
    CHECK(c[1] == doctest::Approx(0.1 / 0.5).epsilon(1e-14));
  }
  SUBCASE("zero-mass type throws") {
    FiniteGame g = CorrelatedTwoByTwo();
    g.prior = {0.5, 0.5, 0.0, 0.0};
    CHECK_THROWS_AS(ConditionalPrior(g, 0, 1), ZeroProbabilityType);
  }
  SUBCASE("random priors sum to one") {
    for (std::uint64_t s = 0; s < 50; ++s) {
      RandomGameSpec spec = SmallSpec(2, 3);
      spec.max_types = 3;
      const FiniteGame g = MakeRandomGame(spec, s);
      for (int i = 0; i < g.NumAgents(); ++i) {
        for (int t = 0; t < g.NumTypes(i); ++t) {
          if (!g.HasPositiveMass(i, t)) continue;
          const auto c = ConditionalPrior(g, i, t);
          double total = 0.0;
          for (double p : c) {
            CHECK(p >= 0.0);
            total += p;
          }
          CHECK(std::abs(total - 1.0) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("expected agent component") {
  FiniteGame g = MakeScreening();
  const double degenerate_a[] = {1.0, 0.0};
  // Types L, H at profiles 0, 1; u(a, L) = 1.
  CHECK(ExpectedAgentComponent(g, 0, 0, degenerate_a, 0) == 1.0);
  CHECK(ExpectedAgentComponent(g, 0, 0, degenerate_a, 1) == 0.0);
  const double half[] = {0.5, 0.5};
  CHECK(ExpectedAgentComponent(g, 0, 0, half, 0) == doctest::Approx(0.5));

  FiniteGame c = MakeZeroGame({2}, {3, 2});
  for (double& u : c.agent_payoffs[0][0]) u = 2.5;
  const double mix[] = {0.2, 0.3, 0.5};
  CHECK(ExpectedAgentComponent(c, 0, 0, mix, 1) == doctest::Approx(2.5));
}

TEST_CASE("expected principal payoff") {
  SUBCASE("matching pennies, uniform coins") {
    const FiniteGame g = MakeMatchingPennies();
    CHECK(ExpectedPrincipalPayoff(g, 0, UniformProfile(g)) ==
          doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("constant payoff") {
    FiniteGame g = MakeZeroGame({2, 2}, {2, 3});
    for (double& v : g.principal_payoffs[1]) v = -1.25;
    Rng rng(3);
    CHECK(ExpectedPrincipalPayoff(g, 1, RandomProfile(g, rng)) ==
          doctest::Approx(-1.25).epsilon(1e-14));
  }
  SUBCASE("degenerate mechanisms") {
    const FiniteGame g = MakeRandomGame(SmallSpec(3, 2), 11);
    MechanismProfile pi;
    std::vector<int> fixed;
    for (int k = 0; k < 3; ++k) {
      fixed.push_back(g.NumActions(k) - 1);
      pi.push_back(DirectMechanism::Degenerate(k, g.NumTypeProfiles(),
                                               g.NumActions(k), fixed[k]));
    }
    const int a = g.ActionSpace().Encode(fixed);
    double expected = 0.0;
    for (int x = 0; x < g.NumTypeProfiles(); ++x) {
      expected += g.prior[x] * g.PrincipalPayoff(0, a, x);
    }
    CHECK(ExpectedPrincipalPayoff(g, 0, pi) ==
          doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("property: principal payoff matches brute force and is multilinear") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const FiniteGame g = MakeRandomGame(SmallSpec(2 + s % 2, 1 + s % 3), s);
    Rng rng(DeriveSeed(s, 1));
    MechanismProfile p = RandomProfile(g, rng);
    const int j = static_cast<int>(s % g.NumPrincipals());
    CHECK(std::abs(ExpectedPrincipalPayoff(g, j, p) -
                   NaivePrincipalPayoff(g, j, p)) <= 1e-10);

    const int k = rng.Below(g.NumPrincipals());
    const DirectMechanism other = testing::RandomMechanism(g, k, rng);
    const double lambda = rng.Uniform();
    MechanismProfile q = p;
    q[k] = other;
    MechanismProfile mixed = p;
    mixed[k] = testing::Mix(p[k], other, lambda);
    const double lhs = ExpectedPrincipalPayoff(g, j, mixed);
    const double rhs = lambda * ExpectedPrincipalPayoff(g, j, p) +
                       (1 - lambda) * ExpectedPrincipalPayoff(g, j, q);
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("property: agent payoff is the sum of its components") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const FiniteGame g = MakeRandomGame(SmallSpec(2 + s % 2, 1 + s % 3), s);
    Rng rng(DeriveSeed(s, 2));
    const MechanismProfile p = RandomProfile(g, rng);
    const MixedRadix actions = g.ActionSpace();
    for (int i = 0; i < g.NumAgents(); ++i) {
      // Joint product distribution over action profiles.
      double joint = 0.0;
      double components = 0.0;
      for (int x = 0; x < g.NumTypeProfiles(); ++x) {
        for (int a = 0; a < actions.Size(); ++a) {
          double prob = g.prior[x];
          double u = 0.0;
          for (int k = 0; k < g.NumPrincipals(); ++k) {
            prob *= p[k].At(x, actions.Digit(a, k));
            u += g.AgentPayoff(i, k, actions.Digit(a, k), x);
          }
          joint += prob * u;
        }
        for (int k = 0; k < g.NumPrincipals(); ++k) {
          components +=
              g.prior[x] * ExpectedAgentComponent(g, i, k, p[k].Row(x), x);
        }
      }
      CHECK(std::abs(joint - components) <= 1e-10);
      CHECK(std::abs(ExpectedAgentPayoff(g, i, p) - joint) <= 1e-10);
    }
  }
}

TEST_CASE("separable decomposition") {
  SUBCASE("constructed separable tables round-trip") {
    for (std::uint64_t s = 0; s < 30; ++s) {
      const FiniteGame g = MakeRandomGame(SmallSpec(2 + s % 2, 1), s);
      const MixedRadix actions = g.ActionSpace();
      const int n = g.NumTypeProfiles();
      std::vector<double> joint(static_cast<size_t>(actions.Size()) * n);
      for (int a = 0; a < actions.Size(); ++a) {
        for (int x = 0; x < n; ++x) {
          double u = 0.0;
          for (int k = 0; k < g.NumPrincipals(); ++k) {
            u += g.AgentPayoff(0, k, actions.Digit(a, k), x);
          }
          joint[static_cast<size_t>(a) * n + x] = u;
        }
      }
      const auto d = DecomposeSeparable(g, joint);
      CHECK(d.residual <= 1e-12);
      for (int a = 0; a < actions.Size(); ++a) {
        for (int x = 0; x < n; ++x) {
          double fit = 0.0;
          for (int k = 0; k < g.NumPrincipals(); ++k) {
            fit += d.components[k][static_cast<size_t>(actions.Digit(a, k)) *
                                       n + x];
          }
          CHECK(std::abs(fit - joint[static_cast<size_t>(a) * n + x]) <=
                1e-9);
        }
      }
    }
  }
  SUBCASE("product interaction is rejected") {
    const FiniteGame g = MakeZeroGame({1}, {2, 2});
    // a_1 * a_2 over action profiles (0,0), (0,1), (1,0), (1,1).
    const std::vector<double> joint = {0, 0, 0, 1};
    CHECK_THROWS_AS(DecomposeSeparable(g, joint), NotSeparable);
    try {
      DecomposeSeparable(g, joint);
    } catch (const NotSeparable& e) {
      // Every cell misfits by 1/4 for the additive projection.
      CHECK(e.residual() == doctest::Approx(0.25));
    }
  }
  SUBCASE("zero table") {
    const FiniteGame g = MakeZeroGame({2}, {2, 3});
    const std::vector<double> joint(6 * 2, 0.0);
    const auto d = DecomposeSeparable(g, joint);
    for (const auto& c : d.components) {
      for (double v : c) CHECK(v == 0.0);
    }
  }
}

}  // namespace
}  // namespace mechpoly
