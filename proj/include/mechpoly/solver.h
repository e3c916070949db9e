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

#ifndef MECHPOLY_SOLVER_H_
#define MECHPOLY_SOLVER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mechpoly/bic.h"
#include "mechpoly/game.h"
#include "mechpoly/game_families.h"

namespace mechpoly {

enum class CertificateKind {
  kExactLp,                 // minmax, J = 2 saddle LP
  kVertexProductExact,      // maxmin over vertex products
  kAlternatingUpperBound,   // minmax, block-coordinate descent
  kGridCertifiedLowerBound, // minmax, lattice evaluation
  kAlternating,             // maxmin, heuristic; gap_bound is -1
};

std::string ToString(CertificateKind kind);
std::optional<CertificateKind> ParseCertificateKind(const std::string& s);

inline constexpr double kUnknownGap = -1.0;

struct ValueCertificate {
  CertificateKind kind = CertificateKind::kExactLp;
  int principal = 0;
  double value = 0.0;
  double gap_bound = 0.0;
  // Full profile. For minmax kinds entry `principal` is a best response to
  // the punishment in the other entries; for maxmin kinds the other entries
  // are a minimizing reply to entry `principal`.
  MechanismProfile witness;
  // Payoff of `principal` at the witness. For the grid kind this is an
  // upper bound on the minmax value.
  double witness_value = 0.0;
};

struct BestResponse {
  double value = 0.0;
  DirectMechanism mechanism;
};

// Maximizes principal j's payoff over its BIC polytope against the other
// entries of `profile` (entry j is ignored).
BestResponse ComputeBestResponse(const FiniteGame& game, int j,
                                 const MechanismProfile& profile);
BestResponse ComputeBestResponse(const FiniteGame& game, const BicPolytope& own,
                                 const MechanismProfile& profile);

enum class MinmaxMode { kExact2, kGrid, kAlternating };

std::string ToString(MinmaxMode mode);
std::optional<MinmaxMode> ParseMinmaxMode(const std::string& s);

struct SolverParams {
  int dim_cap = kDefaultDimCap;   // vertex enumeration
  double grid_step = 1e-2;        // delta, in (0, 0.5]
  int grid_dim_cap = 4;           // free coordinates of the punishers
  double max_grid_points = 5e6;
  int restarts = 32;
  int max_rounds = 200;           // alternating sweeps per restart
  std::uint64_t seed = 0;
  bool force_exact = false;       // maxmin: no heuristic fallback
};

// Exact J = 2 minmax: the inner best-response LP is dualized so that the
// minimization over the punisher's polytope becomes a single LP.
ValueCertificate MinmaxExact2(const FiniteGame& game, int j);

// Same value by bisection over feasibility LPs of the dual system. Used to
// cross-check MinmaxExact2.
double MinmaxExact2Bisection(const FiniteGame& game, int j,
                             double tol = 1e-9);

ValueCertificate MinmaxGrid(const FiniteGame& game, int j,
                            const SolverParams& params);

ValueCertificate MinmaxAlternating(const FiniteGame& game, int j,
                                   const SolverParams& params);

ValueCertificate Minmax(const FiniteGame& game, int j, MinmaxMode mode,
                        const SolverParams& params);

ValueCertificate Maxmin(const FiniteGame& game, int j,
                        const SolverParams& params);

struct Punishment {
  MechanismProfile profile;  // entry j holds j's best response
  double value = 0.0;        // j's best-response value against it
  CertificateKind kind = CertificateKind::kExactLp;
};

Punishment PunishmentProfile(const FiniteGame& game, int j, MinmaxMode mode,
                             const SolverParams& params);

enum class MembershipVerdict {
  kMember,
  kNonMember,
  // Passes every inequality, but some certificate is not exact.
  kConsistentWithMembership,
  // Fails only against upper-bound or heuristic certificates.
  kInconclusive,
};

std::string ToString(MembershipVerdict verdict);

struct PrincipalSlack {
  int principal = 0;
  double payoff = 0.0;
  double threshold = 0.0;  // value - max(gap_bound, 0)
  double slack = 0.0;      // payoff - threshold
  CertificateKind kind = CertificateKind::kExactLp;
  bool passes = true;
};

struct MembershipResult {
  MembershipVerdict verdict = MembershipVerdict::kMember;
  ProfileBicVerdict bic;
  std::vector<PrincipalSlack> principals;
};

MembershipResult RobustPbeMembership(
    const FiniteGame& game, const MechanismProfile& profile,
    const std::vector<ValueCertificate>& certificates, double tol = 1e-6);

enum class GapFamily { kGap3, kConstant, kRandom };

std::string ToString(GapFamily family);
std::optional<GapFamily> ParseGapFamily(const std::string& s);

struct GapSearchParams {
  GapFamily family = GapFamily::kGap3;
  int budget = 500;
  double grid_step = 1e-2;
  std::uint64_t seed = 42;
  RandomGameSpec random_spec;  // kRandom only
  SolverParams solver;
};

struct GapSearchResult {
  bool found = false;        // at least one instance evaluated
  int evaluated = 0;
  int instances_above_001 = 0;
  int best_index = -1;
  std::uint64_t best_seed = 0;
  FiniteGame best_game;
  int best_principal = 0;
  double maxmin = 0.0;
  double minmax_lower_bound = 0.0;
  double minmax_upper_bound = 0.0;
  double gap = 0.0;  // certified lower bound minus maxmin
  ValueCertificate maxmin_certificate;
  ValueCertificate minmax_certificate;
};

GapSearchResult SearchMinmaxMaxminGap(const GapSearchParams& params);

}  // namespace mechpoly

#endif  // MECHPOLY_SOLVER_H_
