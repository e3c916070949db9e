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

#ifndef MECHPOLY_LP_H_
#define MECHPOLY_LP_H_

#include <limits>
#include <string>
#include <vector>

namespace mechpoly {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { kLessEqual, kGreaterEqual, kEqual };
enum class Sense { kMaximize, kMinimize };

struct LpRow {
  std::vector<double> coeffs;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

// Dense linear program. Variables default to [0, +inf).
struct LpProblem {
  Sense sense = Sense::kMaximize;
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;

  explicit LpProblem(int num_variables = 0, Sense s = Sense::kMaximize)
      : sense(s),
        objective(num_variables, 0.0),
        lower(num_variables, 0.0),
        upper(num_variables, kInfinity) {}

  int NumVariables() const { return static_cast<int>(objective.size()); }
  int AddVariable(double lo = 0.0, double hi = kInfinity, double cost = 0.0);
  void AddRow(std::vector<double> coeffs, Relation relation, double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string ToString(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  std::vector<double> x;
  // One multiplier per row, signed so that value == sum(duals * rhs) +
  // bound terms at optimality.
  std::vector<double> duals;
  double primal_residual = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
};

// Two-phase dense simplex. Entering columns by largest reduced cost with
// index order breaking ties; switches to Bland's rule after a run of
// degenerate pivots. Deterministic given the input. Returns kInfeasible or
// kUnbounded as data; throws NumericalFailure when the primal residual
// stays above 1e-9 or the duality gap above 1e-7 after refinement.
LpSolution SolveLp(const LpProblem& problem);

// SolveLp, throwing NumericalFailure unless the status is optimal.
LpSolution SolveLpOrThrow(const LpProblem& problem, const char* what);

}  // namespace mechpoly

#endif  // MECHPOLY_LP_H_
