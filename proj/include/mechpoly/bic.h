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

#ifndef MECHPOLY_BIC_H_
#define MECHPOLY_BIC_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mechpoly/game.h"
#include "mechpoly/lp.h"

namespace mechpoly {

inline constexpr double kMembershipTol = 1e-9;
inline constexpr int kDefaultDimCap = 12;

// Interim truth-telling constraint for agent `agent` of type `truth`
// against misreport `report`, as coefficients over the owner's probability
// variables: sum coeffs * p >= 0.
struct IcRow {
  int agent = 0;
  int truth = 0;
  int report = 0;
  std::vector<double> coeffs;
};

// The set of individually BIC direct mechanisms of one principal. The
// variable for (type profile x, action a) has index x * num_actions + a;
// besides the IC rows, every row of p sums to one and p >= 0.
struct BicPolytope {
  int owner = 0;
  int num_profiles = 0;
  int num_actions = 0;
  std::vector<IcRow> ic_rows;  // ordered by (agent, truth, report)

  int NumVariables() const { return num_profiles * num_actions; }
  int NumRows() const {
    return num_profiles + static_cast<int>(ic_rows.size());
  }
  int Var(int x, int a) const { return x * num_actions + a; }
};

BicPolytope BuildBicPolytope(const FiniteGame& game, int j);

// Textual H-representation: a header comment, the simplex equalities and
// then the IC rows, one "coefficients relation rhs" line each.
std::string ExportHRepresentation(const BicPolytope& poly);

// Appends the polytope rows to `lp` for variables
// [first_var, first_var + poly.NumVariables()).
void AppendPolytopeRows(const BicPolytope& poly, int first_var, LpProblem& lp);

struct IcWitness {
  int agent = 0;
  int truth = 0;
  int report = 0;
  double value = 0.0;
};

struct BicVerdict {
  bool ok = true;
  std::optional<IcWitness> worst;  // most negative row, if any rows exist
};

BicVerdict IsIndividuallyBic(const BicPolytope& poly,
                             const DirectMechanism& mech,
                             double tol = kMembershipTol);
BicVerdict IsIndividuallyBic(const FiniteGame& game, int j,
                             const DirectMechanism& mech,
                             double tol = kMembershipTol);

struct ProfileBicVerdict {
  bool ok = true;
  // Worst joint deviation found: reports[k] is the type announced to
  // principal k.
  int agent = -1;
  int truth = -1;
  std::vector<int> reports;
  double value = 0.0;
  // False when the report-tuple space was too large and the separable
  // per-principal evaluation was used instead.
  bool joint_enumeration = true;
};

// Checks joint truth-telling for the whole profile: every agent, every
// positive-mass type and every vector of (possibly different) reports to
// the J principals, using the agent's full payoff under the product of the
// principals' random actions.
ProfileBicVerdict IsProfileBic(const FiniteGame& game,
                               const MechanismProfile& profile,
                               double tol = kMembershipTol);

// All extreme points of the polytope in lexicographic order of their
// coordinates. Throws DimensionTooLarge when the variable count exceeds
// `dim_cap`.
std::vector<DirectMechanism> EnumerateVertices(const BicPolytope& poly,
                                               int dim_cap = kDefaultDimCap);

// A feasible point: the LP optimum of a seeded random objective.
DirectMechanism SampleBic(const BicPolytope& poly, std::uint64_t seed);

}  // namespace mechpoly

#endif  // MECHPOLY_BIC_H_
