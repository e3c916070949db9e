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
#include "mechpoly/lp.h"
#include "mechpoly/random.h"

namespace mechpoly {
namespace {

TEST_CASE("single bounded variable") {
  LpProblem lp(0, Sense::kMaximize);
  lp.AddVariable(0.0, kInfinity, 1.0);
  lp.AddRow({1.0}, Relation::kLessEqual, 3.0);
  const LpSolution s = SolveLp(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.value == doctest::Approx(3.0));
  CHECK(s.x[0] == doctest::Approx(3.0));
}

TEST_CASE("face of the standard simplex") {
  LpProblem lp(2, Sense::kMaximize);
  lp.objective = {1.0, 1.0};
  lp.AddRow({1.0, 1.0}, Relation::kEqual, 1.0);
  const LpSolution s = SolveLp(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.value == doctest::Approx(1.0));
  CHECK(s.x[0] + s.x[1] == doctest::Approx(1.0));
}

TEST_CASE("contradictory rows are infeasible") {
  LpProblem lp(1, Sense::kMaximize);
  lp.objective = {1.0};
  lp.AddRow({1.0}, Relation::kLessEqual, 0.0);
  lp.AddRow({1.0}, Relation::kGreaterEqual, 1.0);
  CHECK(SolveLp(lp).status == LpStatus::kInfeasible);
  CHECK_THROWS_AS(SolveLpOrThrow(lp, "test"), NumericalFailure);
}

TEST_CASE("unbounded ray") {
  LpProblem lp(2, Sense::kMaximize);
  lp.objective = {1.0, 0.0};
  lp.AddRow({1.0, -1.0}, Relation::kLessEqual, 1.0);
  CHECK(SolveLp(lp).status == LpStatus::kUnbounded);
}

TEST_CASE("free variables and minimization") {
  // min |y - 2| written as min t, t >= y - 2, t >= 2 - y, y free.
  LpProblem lp(0, Sense::kMinimize);
  const int t = lp.AddVariable(0.0, kInfinity, 1.0);
  const int y = lp.AddVariable(-kInfinity, kInfinity, 0.0);
  std::vector<double> r1(2), r2(2);
  r1[t] = 1.0;
  r1[y] = -1.0;
  r2[t] = 1.0;
  r2[y] = 1.0;
  lp.AddRow(r1, Relation::kGreaterEqual, -2.0);
  lp.AddRow(r2, Relation::kGreaterEqual, 2.0);
  const LpSolution s = SolveLp(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(std::abs(s.value) <= 1e-12);
  CHECK(s.x[y] == doctest::Approx(2.0));
}

TEST_CASE("degenerate vertex does not cycle") {
  // Several redundant constraints through the optimum (1, 1).
  LpProblem lp(2, Sense::kMaximize);
  lp.objective = {1.0, 1.0};
  lp.AddRow({1.0, 0.0}, Relation::kLessEqual, 1.0);
  lp.AddRow({0.0, 1.0}, Relation::kLessEqual, 1.0);
  lp.AddRow({1.0, 1.0}, Relation::kLessEqual, 2.0);
  lp.AddRow({2.0, 1.0}, Relation::kLessEqual, 3.0);
  lp.AddRow({1.0, 2.0}, Relation::kLessEqual, 3.0);
  const LpSolution s = SolveLp(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.value == doctest::Approx(2.0));
}

// Optimal value of max c.x over a box intersected with one half-space,
// checked against a brute-force scan of all vertices of the 2-D region.
TEST_CASE("property: random 2-D programs match vertex scan") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const double c0 = rng.Uniform(-1, 1), c1 = rng.Uniform(-1, 1);
    const double w0 = rng.Uniform(0.1, 1), w1 = rng.Uniform(0.1, 1);
    const double b = rng.Uniform(0.2, 1.5);
    LpProblem lp(0, Sense::kMaximize);
    lp.AddVariable(0.0, 1.0, c0);
    lp.AddVariable(0.0, 1.0, c1);
    lp.AddRow({w0, w1}, Relation::kLessEqual, b);
    const LpSolution s = SolveLp(lp);
    REQUIRE(s.status == LpStatus::kOptimal);

    // Candidate vertices: box corners and the line's box intersections.
    std::vector<std::pair<double, double>> pts = {
        {0, 0}, {1, 0}, {0, 1}, {1, 1}};
    for (double x : {0.0, 1.0}) pts.push_back({x, (b - w0 * x) / w1});
    for (double y : {0.0, 1.0}) pts.push_back({(b - w1 * y) / w0, y});
    double best = -1e300;
    for (auto [x, y] : pts) {
      if (x < -1e-12 || x > 1 + 1e-12 || y < -1e-12 || y > 1 + 1e-12) continue;
      if (w0 * x + w1 * y > b + 1e-12) continue;
      best = std::max(best, c0 * x + c1 * y);
    }
    CHECK(std::abs(s.value - best) <= 1e-9);
    CHECK(s.primal_residual <= 1e-9);
  }
}

TEST_CASE("property: weak duality on random feasible programs") {
  // max c.x, A x <= b, x >= 0 with b > 0 and A >= 0 so x = 0 is feasible and
  // the program is bounded when every column has a positive entry.
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(DeriveSeed(seed, 9));
    const int n = 2 + rng.Below(5), m = 2 + rng.Below(5);
    LpProblem lp(n, Sense::kMaximize);
    for (double& c : lp.objective) c = rng.Uniform(-1, 2);
    std::vector<std::vector<double>> a(m, std::vector<double>(n));
    for (int r = 0; r < m; ++r) {
      for (int v = 0; v < n; ++v) a[r][v] = rng.Uniform(0.05, 1.0);
      lp.AddRow(a[r], Relation::kLessEqual, rng.Uniform(0.5, 2.0));
    }
    const LpSolution s = SolveLp(lp);
    REQUIRE(s.status == LpStatus::kOptimal);
    CHECK(std::abs(s.duality_gap) <= 1e-8);
    for (int r = 0; r < m; ++r) {
      double lhs = 0.0;
      for (int v = 0; v < n; ++v) lhs += a[r][v] * s.x[v];
      CHECK(lhs <= lp.rows[r].rhs + 1e-9);
    }
    for (double x : s.x) CHECK(x >= -1e-12);
  }
}

}  // namespace
}  // namespace mechpoly
