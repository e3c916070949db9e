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
#include "mechpoly/solver.h"
#include "test_support.h"

namespace mechpoly {
namespace {

using testing::SmallSpec;
using testing::UniformProfile;

FiniteGame ConstantGame(double c) {
  FiniteGame g = MakeZeroGame({2, 1}, {2, 3});
  for (auto& table : g.principal_payoffs) {
    for (double& v : table) v = c;
  }
  return g;
}

// Singleton types, J = 2, two actions for the punisher: the minmax is
// min over q of max over a_j of the mixed payoff, scanned on a fine grid.
double ScanMinmax(const FiniteGame& g, int j, int steps) {
  const int k = 1 - j;
  const MixedRadix actions = g.ActionSpace();
  double best = 1e300;
  for (int s = 0; s <= steps; ++s) {
    const double q = static_cast<double>(s) / steps;
    double top = -1e300;
    for (int aj = 0; aj < g.NumActions(j); ++aj) {
      double v = 0.0;
      for (int ak = 0; ak < 2; ++ak) {
        std::vector<int> digits(2);
        digits[j] = aj;
        digits[k] = ak;
        v += (ak == 0 ? q : 1 - q) *
             g.PrincipalPayoff(j, actions.Encode(digits), 0);
      }
      top = std::max(top, v);
    }
    best = std::min(best, top);
  }
  return best;
}

TEST_CASE("constant payoffs") {
  const FiniteGame g = ConstantGame(0.75);
  SolverParams params;
  params.grid_step = 0.1;
  for (auto mode : {MinmaxMode::kExact2, MinmaxMode::kGrid,
                    MinmaxMode::kAlternating}) {
    const auto cert = Minmax(g, 0, mode, params);
    CHECK(cert.value + std::max(cert.gap_bound, 0.0) ==
          doctest::Approx(0.75).epsilon(1e-9));
    CHECK(cert.value <= 0.75 + 1e-9);
  }
  CHECK(MinmaxExact2(g, 1).gap_bound == 0.0);
  CHECK(MinmaxExact2(g, 1).value == doctest::Approx(0.75));
  CHECK(Maxmin(g, 0, params).value == doctest::Approx(0.75));
  const Punishment p = PunishmentProfile(g, 1, MinmaxMode::kExact2, params);
  CHECK(p.value == doctest::Approx(0.75));
  const auto br = ComputeBestResponse(g, 0, UniformProfile(g));
  CHECK(br.value == doctest::Approx(0.75));
}

TEST_CASE("matching pennies best responses") {
  const FiniteGame g = MakeMatchingPennies();
  MechanismProfile p = UniformProfile(g);
  CHECK(ComputeBestResponse(g, 0, p).value == doctest::Approx(0.5));

  p[1] = DirectMechanism::Degenerate(1, 1, 2, 0);
  const BestResponse br = ComputeBestResponse(g, 0, p);
  CHECK(br.value == doctest::Approx(1.0));
  CHECK(br.mechanism.At(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("matching pennies values") {
  const FiniteGame g = MakeMatchingPennies();
  SolverParams params;
  const auto exact = MinmaxExact2(g, 0);
  CHECK(exact.kind == CertificateKind::kExactLp);
  CHECK(exact.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(ScanMinmax(g, 0, 1000) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(MinmaxExact2Bisection(g, 0) - exact.value) <= 1e-7);

  const auto maxmin = Maxmin(g, 0, params);
  CHECK(maxmin.kind == CertificateKind::kVertexProductExact);
  CHECK(std::abs(maxmin.value - exact.value) <= 1e-6);

  const Punishment p = PunishmentProfile(g, 0, MinmaxMode::kExact2, params);
  CHECK(p.value == doctest::Approx(0.5));
  CHECK(p.profile[1].At(0, 0) == doctest::Approx(0.5));

  const auto grid = MinmaxGrid(g, 0, params);
  CHECK(grid.kind == CertificateKind::kGridCertifiedLowerBound);
  CHECK(grid.value <= 0.5 + 1e-9);
  CHECK(grid.value >= 0.5 - grid.gap_bound - 1e-9);
  const auto alt = MinmaxAlternating(g, 0, params);
  CHECK(alt.value == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("exact minmax agrees with scan and bisection") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    RandomGameSpec spec = SmallSpec(2, 1);
    spec.max_types = 1;
    spec.min_actions = spec.max_actions = 2;
    const FiniteGame g = MakeRandomGame(spec, s);
    const double exact = MinmaxExact2(g, 0).value;
    // The scan evaluates a piecewise-linear convex function on a 1e-4
    // lattice; its error is at most step * (max payoff spread) / 2.
    CHECK(std::abs(exact - ScanMinmax(g, 0, 10000)) <= 1e-4);
    CHECK(ScanMinmax(g, 0, 10000) >= exact - 1e-12);
    CHECK(std::abs(exact - MinmaxExact2Bisection(g, 0)) <= 1e-7);
  }
}

TEST_CASE("property: two-principal minmax equals maxmin") {
  SolverParams params;
  for (std::uint64_t s = 0; s < 30; ++s) {
    RandomGameSpec spec = SmallSpec(2, 1 + s % 2);
    spec.max_variables = 8;
    const FiniteGame g = MakeRandomGame(spec, s);
    for (int j = 0; j < 2; ++j) {
      const double lo = Maxmin(g, j, params).value;
      const double hi = MinmaxExact2(g, j).value;
      CHECK(std::abs(hi - lo) <= 1e-6);
    }
  }
}

TEST_CASE("property: grid bound is sound and tight for two principals") {
  SolverParams params;
  params.grid_step = 0.05;
  for (std::uint64_t s = 0; s < 40; ++s) {
    RandomGameSpec spec = SmallSpec(2, 1 + s % 2);
    spec.max_types = 1 + s % 2;
    spec.max_actions = 2;
    spec.principal_payoff_lo = -2.0;
    spec.principal_payoff_hi = 3.0;
    const FiniteGame g = MakeRandomGame(spec, s);
    const double exact = MinmaxExact2(g, 0).value;
    const auto grid = MinmaxGrid(g, 0, params);
    CHECK(grid.value <= exact + 1e-9);
    // The lattice spans all punisher mechanisms, BIC or not, so it is
    // tight only when the punisher has no IC constraints.
    if (g.NumTypeProfiles() == 1) {
      CHECK(grid.value >= exact - grid.gap_bound - 1e-9);
    }
  }
}

TEST_CASE("property: weak duality with three principals") {
  SolverParams params;
  params.restarts = 8;
  params.grid_step = 0.05;
  for (std::uint64_t s = 0; s < 12; ++s) {
    RandomGameSpec spec = SmallSpec(3, 1);
    spec.max_types = 1;
    spec.min_actions = spec.max_actions = 2;
    const FiniteGame g = MakeRandomGame(spec, s);
    const auto maxmin = Maxmin(g, 0, params);
    const auto upper = MinmaxAlternating(g, 0, params);
    const auto lower = MinmaxGrid(g, 0, params);
    CHECK(upper.kind == CertificateKind::kAlternatingUpperBound);
    CHECK(maxmin.value <= upper.value + 1e-6);
    CHECK(lower.value <= upper.value + 1e-6);
    // The lower bound's witness is a grid point whose best-response value
    // sits within gap_bound of the certified bound.
    CHECK(lower.witness_value >= lower.value - 1e-9);
    CHECK(lower.witness_value <= lower.value + lower.gap_bound + 1e-9);
  }
}

TEST_CASE("property: best response dominates feasible mechanisms") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const FiniteGame g = MakeRandomGame(SmallSpec(2 + s % 2, 2), s);
    Rng rng(DeriveSeed(s, 3));
    MechanismProfile p = testing::RandomProfile(g, rng);
    const int j = static_cast<int>(s % g.NumPrincipals());
    const BicPolytope poly = BuildBicPolytope(g, j);
    const BestResponse br = ComputeBestResponse(g, j, p);
    CHECK(IsIndividuallyBic(poly, br.mechanism, 1e-9).ok);
    p[j] = br.mechanism;
    CHECK(ExpectedPrincipalPayoff(g, j, p) == doctest::Approx(br.value));
    int worse = 0;
    DirectMechanism prev = SampleBic(poly, DeriveSeed(s, 100));
    for (int n = 0; n < 100; ++n) {
      DirectMechanism m = SampleBic(poly, DeriveSeed(s, n));
      if (n % 2 == 1) m = testing::Mix(m, prev, rng.Uniform());
      prev = m;
      p[j] = m;
      if (ExpectedPrincipalPayoff(g, j, p) > br.value + 1e-8) ++worse;
    }
    CHECK(worse == 0);
  }
}

TEST_CASE("punishment witnesses are BIC") {
  SolverParams params;
  params.restarts = 4;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const FiniteGame g = MakeRandomGame(SmallSpec(2 + s % 2, 2), s);
    const MinmaxMode mode =
        g.NumPrincipals() == 2 ? MinmaxMode::kExact2 : MinmaxMode::kAlternating;
    const Punishment p = PunishmentProfile(g, 0, mode, params);
    for (int k = 0; k < g.NumPrincipals(); ++k) {
      CHECK(IsIndividuallyBic(g, k, p.profile[k], 1e-9).ok);
    }
    CHECK(ExpectedPrincipalPayoff(g, 0, p.profile) ==
          doctest::Approx(p.value).epsilon(1e-7));
  }
}

TEST_CASE("exact minmax needs two principals") {
  CHECK_THROWS_AS(MinmaxExact2(MakeGap3Instance(1), 0), ModeUnsupported);
}

TEST_CASE("stochastic solvers are reproducible") {
  const FiniteGame g = MakeGap3Instance(5);
  SolverParams params;
  params.restarts = 6;
  params.seed = 99;
  const auto a = MinmaxAlternating(g, 0, params);
  const auto b = MinmaxAlternating(g, 0, params);
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);
}

TEST_CASE("membership") {
  const FiniteGame g = MakeMatchingPennies();
  const std::vector<ValueCertificate> certs = {MinmaxExact2(g, 0),
                                               MinmaxExact2(g, 1)};
  SUBCASE("uniform coins are a member with zero slack") {
    const auto r = RobustPbeMembership(g, UniformProfile(g), certs);
    CHECK(r.verdict == MembershipVerdict::kMember);
    for (const auto& s : r.principals) {
      CHECK(std::abs(s.slack) <= 1e-9);
    }
  }
  SUBCASE("mismatched pure play starves principal 1") {
    const MechanismProfile p = {DirectMechanism::Degenerate(0, 1, 2, 0),
                                DirectMechanism::Degenerate(1, 1, 2, 1)};
    const auto r = RobustPbeMembership(g, p, certs);
    CHECK(r.verdict == MembershipVerdict::kNonMember);
    CHECK_FALSE(r.principals[0].passes);
    CHECK(r.principals[0].slack == doctest::Approx(-0.5));
    CHECK(r.principals[1].passes);
  }
  SUBCASE("upper bounds alone only show consistency") {
    SolverParams params;
    const std::vector<ValueCertificate> alt = {
        MinmaxAlternating(g, 0, params), MinmaxAlternating(g, 1, params)};
    const auto r = RobustPbeMembership(g, UniformProfile(g), alt);
    CHECK(r.verdict == MembershipVerdict::kConsistentWithMembership);
  }
  SUBCASE("constant payoffs: every BIC profile is a member") {
    const FiniteGame c = ConstantGame(2.0);
    SolverParams params;
    const std::vector<ValueCertificate> cc = {MinmaxExact2(c, 0),
                                              MinmaxExact2(c, 1)};
    for (std::uint64_t s = 0; s < 10; ++s) {
      MechanismProfile p;
      for (int j = 0; j < 2; ++j) {
        p.push_back(SampleBic(BuildBicPolytope(c, j), s));
      }
      CHECK(RobustPbeMembership(c, p, cc).verdict ==
            MembershipVerdict::kMember);
    }
  }
  SUBCASE("non-BIC profile is rejected") {
    const FiniteGame sc = MakeScreening();
    DirectMechanism swapped = DirectMechanism::Degenerate(0, 2, 2, 0);
    swapped.At(0, 0) = 0.0;
    swapped.At(0, 1) = 1.0;
    swapped.At(1, 0) = 1.0;
    swapped.At(1, 1) = 0.0;
    const MechanismProfile p = {swapped,
                                DirectMechanism::Degenerate(1, 2, 1, 0)};
    const std::vector<ValueCertificate> sc_certs = {MinmaxExact2(sc, 0),
                                                    MinmaxExact2(sc, 1)};
    CHECK(RobustPbeMembership(sc, p, sc_certs).verdict ==
          MembershipVerdict::kNonMember);
  }
}

TEST_CASE("gap search families") {
  SUBCASE("two principals never show a gap") {
    GapSearchParams params;
    params.family = GapFamily::kRandom;
    params.budget = 15;
    params.random_spec = SmallSpec(2, 1);
    params.random_spec.max_variables = 8;
    const auto r = SearchMinmaxMaxminGap(params);
    CHECK(r.found);
    CHECK(r.gap <= 1e-6);
  }
  SUBCASE("constant payoffs have zero gap") {
    GapSearchParams params;
    params.family = GapFamily::kConstant;
    params.budget = 5;
    const auto r = SearchMinmaxMaxminGap(params);
    CHECK(std::abs(r.gap) <= 1e-12);
  }
  SUBCASE("a short three-principal search finds a certified gap") {
    GapSearchParams params;
    params.budget = 10;
    const auto r = SearchMinmaxMaxminGap(params);
    CHECK(r.evaluated == 10);
    CHECK(r.gap > 0.01);
    CHECK(r.minmax_lower_bound - r.maxmin == doctest::Approx(r.gap));
    CHECK(r.minmax_lower_bound <= r.minmax_upper_bound + 1e-6);
  }
}

}  // namespace
}  // namespace mechpoly
