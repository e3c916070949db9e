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

#include "mechpoly/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mechpoly/errors.h"
#include "mechpoly/random.h"

namespace mechpoly {
namespace {

constexpr double kSnap = 1e-12;
// Vertex products beyond this many epigraph rows make the exact maxmin LP
// too large for the dense simplex.
constexpr double kMaxVertexProducts = 20000;

DirectMechanism ToMechanism(int owner, int num_actions,
                            std::span<const double> x) {
  DirectMechanism mech;
  mech.owner = owner;
  mech.num_actions = num_actions;
  mech.probs.assign(x.begin(), x.end());
  for (double& p : mech.probs) {
    if (std::abs(p) < kSnap || p < 0.0) p = 0.0;
    if (std::abs(p - 1.0) < kSnap) p = 1.0;
  }
  return mech;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t e = 0; e < a.size(); ++e) s += a[e] * b[e];
  return s;
}

bool LexLess(const MechanismProfile& a, const MechanismProfile& b) {
  for (size_t k = 0; k < a.size(); ++k) {
    if (a[k].probs != b[k].probs) {
      return std::lexicographical_compare(a[k].probs.begin(),
                                          a[k].probs.end(),
                                          b[k].probs.begin(),
                                          b[k].probs.end());
    }
  }
  return false;
}

std::vector<BicPolytope> BuildAll(const FiniteGame& game) {
  std::vector<BicPolytope> polys;
  for (int k = 0; k < game.NumPrincipals(); ++k) {
    polys.push_back(BuildBicPolytope(game, k));
  }
  return polys;
}

BestResponse OptimizeLinear(const BicPolytope& poly,
                            const std::vector<double>& c, Sense sense) {
  LpProblem lp(poly.NumVariables(), sense);
  lp.objective = c;
  AppendPolytopeRows(poly, 0, lp);
  const LpSolution sol = SolveLpOrThrow(lp, "linear optimization over Pi^B");
  BestResponse out;
  out.mechanism = ToMechanism(poly.owner, poly.num_actions, sol.x);
  out.value = Dot(c, out.mechanism.probs);
  return out;
}

// Placeholder entries for principals whose mechanism a computation ignores.
MechanismProfile UniformProfile(const FiniteGame& game) {
  MechanismProfile profile;
  for (int k = 0; k < game.NumPrincipals(); ++k) {
    const std::vector<double> alpha(game.NumActions(k),
                                    1.0 / game.NumActions(k));
    profile.push_back(
        DirectMechanism::Constant(k, game.NumTypeProfiles(), alpha));
  }
  return profile;
}

struct SaddleResult {
  double value = 0.0;
  DirectMechanism punisher;
};

// Variables of the dualized inner problem: the punisher's mechanism p_k,
// one free multiplier mu_x per simplex equality of j, and lambda_r >= 0 per
// nonzero IC row of j. For fixed p_k the constraints
//   mu_x - sum_r lambda_r G_r[x, a] >= c_{x,a}(p_k)
// are the dual of j's best-response LP, so min sum mu_x is the saddle value.
struct SaddleLayout {
  int first_mu = 0;
  int first_lambda = 0;
  std::vector<const IcRow*> rows;
};

LpProblem BuildSaddleLp(const FiniteGame& game, int j, int k,
                        const MechanismProfile& profile,
                        const BicPolytope& own, const BicPolytope& punisher,
                        SaddleLayout& layout) {
  const int num_profiles = game.NumTypeProfiles();
  const int own_actions = game.NumActions(j);
  const int pun_actions = game.NumActions(k);
  for (const IcRow& row : own.ic_rows) {
    if (std::any_of(row.coeffs.begin(), row.coeffs.end(),
                    [](double c) { return c != 0.0; })) {
      layout.rows.push_back(&row);
    }
  }
  LpProblem lp(punisher.NumVariables(), Sense::kMinimize);
  layout.first_mu = lp.NumVariables();
  for (int x = 0; x < num_profiles; ++x) {
    lp.AddVariable(-kInfinity, kInfinity, 1.0);
  }
  layout.first_lambda = lp.NumVariables();
  for (size_t r = 0; r < layout.rows.size(); ++r) lp.AddVariable();

  const auto blocks = BilinearPayoffBlocks(game, j, profile, j, k);
  const int n = lp.NumVariables();
  for (int x = 0; x < num_profiles; ++x) {
    for (int a = 0; a < own_actions; ++a) {
      std::vector<double> coeffs(n, 0.0);
      coeffs[layout.first_mu + x] = 1.0;
      for (size_t r = 0; r < layout.rows.size(); ++r) {
        coeffs[layout.first_lambda + r] = -layout.rows[r]->coeffs[own.Var(x, a)];
      }
      for (int b = 0; b < pun_actions; ++b) {
        coeffs[punisher.Var(x, b)] =
            -blocks[x][static_cast<size_t>(a) * pun_actions + b];
      }
      lp.AddRow(std::move(coeffs), Relation::kGreaterEqual, 0.0);
    }
  }
  AppendPolytopeRows(punisher, 0, lp);
  return lp;
}

SaddleResult SolveSaddle(const FiniteGame& game, int j, int k,
                         const MechanismProfile& profile,
                         const BicPolytope& own, const BicPolytope& punisher) {
  SaddleLayout layout;
  const LpProblem lp = BuildSaddleLp(game, j, k, profile, own, punisher, layout);
  const LpSolution sol = SolveLpOrThrow(lp, "minmax saddle LP");
  SaddleResult out;
  out.value = sol.value;
  out.punisher = ToMechanism(
      k, punisher.num_actions,
      std::span<const double>(sol.x.data(), punisher.NumVariables()));
  return out;
}

// Sum over x of F(x) times half the spread of v_j(., x). Moving one
// distribution by d in L1 moves j's payoff by at most |d| times this
// weight, since the change has zero total mass.
double HalfRangePayoffMass(const FiniteGame& game, int j) {
  const int num_profiles = game.NumTypeProfiles();
  double total = 0.0;
  for (int x = 0; x < num_profiles; ++x) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int a = 0; a < game.NumActionProfiles(); ++a) {
      lo = std::min(lo, game.PrincipalPayoff(j, a, x));
      hi = std::max(hi, game.PrincipalPayoff(j, a, x));
    }
    total += game.prior[x] * 0.5 * (hi - lo);
  }
  return total;
}

// All compositions of n into m nonnegative parts, in lexicographic order.
std::vector<std::vector<int>> Compositions(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(m, 0);
  auto recurse = [&](auto&& self, int pos, int left) -> void {
    if (pos == m - 1) {
      current[pos] = left;
      out.push_back(current);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      current[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  recurse(recurse, 0, n);
  return out;
}

// Evaluates max over Pi_j^B of the linear payoff, using the vertex list
// when one is available.
class InnerMax {
 public:
  InnerMax(const FiniteGame& game, int j, const BicPolytope& own, int dim_cap)
      : game_(game), j_(j), own_(own) {
    if (own.NumVariables() <= dim_cap) {
      vertices_ = EnumerateVertices(own, dim_cap);
    }
  }

  double operator()(const MechanismProfile& profile) const {
    const std::vector<double> c =
        LinearPayoffCoefficients(game_, j_, profile, j_);
    if (vertices_.empty()) {
      return OptimizeLinear(own_, c, Sense::kMaximize).value;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : vertices_) best = std::max(best, Dot(c, v.probs));
    return best;
  }

 private:
  const FiniteGame& game_;
  int j_;
  const BicPolytope& own_;
  std::vector<DirectMechanism> vertices_;
};

void CheckPrincipal(const FiniteGame& game, int j) {
  if (j < 0 || j >= game.NumPrincipals()) {
    throw InputError("principal index out of range");
  }
}

ValueCertificate MaxminHeuristic(const FiniteGame& game, int j,
                                 const std::vector<BicPolytope>& polys,
                                 const SolverParams& params) {
  const int num_principals = game.NumPrincipals();
  const BicPolytope& own = polys[j];

  // Minimizes j's payoff over the others by block-coordinate descent from
  // `start`; each block step is an LP.
  auto descend = [&](MechanismProfile profile) {
    double value = ExpectedPrincipalPayoff(game, j, profile);
    for (int round = 0; round < params.max_rounds; ++round) {
      const double before = value;
      for (int k = 0; k < num_principals; ++k) {
        if (k == j) continue;
        const auto c = LinearPayoffCoefficients(game, j, profile, k);
        BestResponse step = OptimizeLinear(polys[k], c, Sense::kMinimize);
        profile[k] = std::move(step.mechanism);
        value = step.value;
      }
      if (before - value <= 1e-12) break;
    }
    return std::pair{value, profile};
  };

  std::vector<MechanismProfile> cuts;
  const int initial = std::max(1, std::min(params.restarts, 8));
  for (int r = 0; r < initial; ++r) {
    MechanismProfile profile = UniformProfile(game);
    for (int k = 0; k < num_principals; ++k) {
      if (k != j) {
        profile[k] = SampleBic(polys[k], DeriveSeed(params.seed + r, k));
      }
    }
    cuts.push_back(std::move(profile));
  }

  ValueCertificate best;
  best.kind = CertificateKind::kAlternating;
  best.principal = j;
  best.gap_bound = kUnknownGap;
  best.value = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 60; ++iter) {
    LpProblem lp(own.NumVariables(), Sense::kMaximize);
    const int t = lp.AddVariable(-kInfinity, kInfinity, 1.0);
    AppendPolytopeRows(own, 0, lp);
    for (const auto& cut : cuts) {
      const auto c = LinearPayoffCoefficients(game, j, cut, j);
      std::vector<double> coeffs(lp.NumVariables(), 0.0);
      for (size_t e = 0; e < c.size(); ++e) coeffs[e] = -c[e];
      coeffs[t] = 1.0;
      lp.AddRow(std::move(coeffs), Relation::kLessEqual, 0.0);
    }
    const LpSolution sol = SolveLpOrThrow(lp, "maxmin cutting plane");
    const double upper = sol.value;
    DirectMechanism mine = ToMechanism(
        j, own.num_actions,
        std::span<const double>(sol.x.data(), own.NumVariables()));

    double inner = std::numeric_limits<double>::infinity();
    MechanismProfile argmin;
    std::vector<MechanismProfile> starts = {cuts.back()};
    for (int r = 0; r < 3; ++r) {
      MechanismProfile profile = UniformProfile(game);
      for (int k = 0; k < num_principals; ++k) {
        if (k != j) {
          profile[k] =
              SampleBic(polys[k], DeriveSeed(params.seed + 1000 + iter, 3 * k + r));
        }
      }
      starts.push_back(std::move(profile));
    }
    for (auto& start : starts) {
      start[j] = mine;
      auto [value, profile] = descend(start);
      if (value < inner) {
        inner = value;
        argmin = std::move(profile);
      }
    }
    if (inner > best.value) {
      best.value = inner;
      best.witness = argmin;
      best.witness_value = inner;
    }
    if (upper - inner <= 1e-9) break;
    cuts.push_back(std::move(argmin));
  }
  return best;
}

}  // namespace

std::string ToString(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::kExactLp:
      return "exact-lp";
    case CertificateKind::kVertexProductExact:
      return "vertex-product-exact";
    case CertificateKind::kAlternatingUpperBound:
      return "alternating-upper-bound";
    case CertificateKind::kGridCertifiedLowerBound:
      return "grid-certified-lower-bound";
    case CertificateKind::kAlternating:
      return "alternating";
  }
  return "unknown";
}

std::optional<CertificateKind> ParseCertificateKind(const std::string& s) {
  for (auto kind :
       {CertificateKind::kExactLp, CertificateKind::kVertexProductExact,
        CertificateKind::kAlternatingUpperBound,
        CertificateKind::kGridCertifiedLowerBound,
        CertificateKind::kAlternating}) {
    if (ToString(kind) == s) return kind;
  }
  return std::nullopt;
}

std::string ToString(MinmaxMode mode) {
  switch (mode) {
    case MinmaxMode::kExact2:
      return "exact2";
    case MinmaxMode::kGrid:
      return "grid";
    case MinmaxMode::kAlternating:
      return "alternating";
  }
  return "unknown";
}

std::optional<MinmaxMode> ParseMinmaxMode(const std::string& s) {
  for (auto mode :
       {MinmaxMode::kExact2, MinmaxMode::kGrid, MinmaxMode::kAlternating}) {
    if (ToString(mode) == s) return mode;
  }
  return std::nullopt;
}

std::string ToString(MembershipVerdict verdict) {
  switch (verdict) {
    case MembershipVerdict::kMember:
      return "member";
    case MembershipVerdict::kNonMember:
      return "non-member";
    case MembershipVerdict::kConsistentWithMembership:
      return "consistent-with-membership";
    case MembershipVerdict::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::string ToString(GapFamily family) {
  switch (family) {
    case GapFamily::kGap3:
      return "gap3";
    case GapFamily::kConstant:
      return "constant";
    case GapFamily::kRandom:
      return "random";
  }
  return "unknown";
}

std::optional<GapFamily> ParseGapFamily(const std::string& s) {
  for (auto family :
       {GapFamily::kGap3, GapFamily::kConstant, GapFamily::kRandom}) {
    if (ToString(family) == s) return family;
  }
  return std::nullopt;
}

BestResponse ComputeBestResponse(const FiniteGame& game, const BicPolytope& own,
                                 const MechanismProfile& profile) {
  const auto c = LinearPayoffCoefficients(game, own.owner, profile, own.owner);
  return OptimizeLinear(own, c, Sense::kMaximize);
}

BestResponse ComputeBestResponse(const FiniteGame& game, int j,
                                 const MechanismProfile& profile) {
  CheckPrincipal(game, j);
  return ComputeBestResponse(game, BuildBicPolytope(game, j), profile);
}

ValueCertificate MinmaxExact2(const FiniteGame& game, int j) {
  CheckPrincipal(game, j);
  if (game.NumPrincipals() != 2) {
    throw ModeUnsupported("exact2 minmax requires exactly two principals");
  }
  const int k = 1 - j;
  const auto polys = BuildAll(game);
  MechanismProfile profile = UniformProfile(game);
  const SaddleResult saddle =
      SolveSaddle(game, j, k, profile, polys[j], polys[k]);
  profile[k] = saddle.punisher;
  BestResponse reply = ComputeBestResponse(game, polys[j], profile);
  profile[j] = std::move(reply.mechanism);

  ValueCertificate cert;
  cert.kind = CertificateKind::kExactLp;
  cert.principal = j;
  cert.value = saddle.value;
  cert.gap_bound = 0.0;
  cert.witness = std::move(profile);
  cert.witness_value = reply.value;
  return cert;
}

double MinmaxExact2Bisection(const FiniteGame& game, int j, double tol) {
  CheckPrincipal(game, j);
  if (game.NumPrincipals() != 2) {
    throw ModeUnsupported("exact2 minmax requires exactly two principals");
  }
  const int k = 1 - j;
  const auto polys = BuildAll(game);
  const MechanismProfile profile = UniformProfile(game);
  SaddleLayout layout;
  LpProblem base =
      BuildSaddleLp(game, j, k, profile, polys[j], polys[k], layout);
  // Feasibility only: the objective row becomes the constraint sum mu <= t.
  std::vector<double> budget(base.NumVariables(), 0.0);
  for (int x = 0; x < game.NumTypeProfiles(); ++x) {
    budget[layout.first_mu + x] = 1.0;
  }
  std::fill(base.objective.begin(), base.objective.end(), 0.0);

  double lo = 0.0;
  double hi = 0.0;
  for (int x = 0; x < game.NumTypeProfiles(); ++x) {
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    for (int a = 0; a < game.NumActionProfiles(); ++a) {
      vmin = std::min(vmin, game.PrincipalPayoff(j, a, x));
      vmax = std::max(vmax, game.PrincipalPayoff(j, a, x));
    }
    lo += game.prior[x] * vmin;
    hi += game.prior[x] * vmax;
  }
  lo -= 1e-9;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    LpProblem lp = base;
    lp.AddRow(budget, Relation::kLessEqual, mid);
    if (SolveLp(lp).status == LpStatus::kOptimal) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

ValueCertificate MinmaxGrid(const FiniteGame& game, int j,
                            const SolverParams& params) {
  CheckPrincipal(game, j);
  if (!(params.grid_step > 0.0 && params.grid_step <= 0.5)) {
    throw InputError("grid step must lie in (0, 0.5]");
  }
  const int num_profiles = game.NumTypeProfiles();
  int free_dim = 0;
  int free_blocks = 0;
  int action_excess = 0;
  for (int k = 0; k < game.NumPrincipals(); ++k) {
    if (k == j) continue;
    free_dim += num_profiles * (game.NumActions(k) - 1);
    if (game.NumActions(k) >= 2) free_blocks += num_profiles;
    action_excess += game.NumActions(k) - 1;
  }
  if (free_dim > params.grid_dim_cap) {
    throw DimensionTooLarge("grid minmax: punishers have " +
                            std::to_string(free_dim) +
                            " free coordinates, cap is " +
                            std::to_string(params.grid_dim_cap));
  }
  const int steps = static_cast<int>(std::ceil(1.0 / params.grid_step - 1e-9));
  const double step = 1.0 / steps;

  // One block per (punisher, type profile); lattice points per block are
  // compositions of `steps` into |A_k| parts.
  struct Block {
    int k;
    int x;
    const std::vector<std::vector<int>>* lattice;
  };
  std::vector<std::vector<std::vector<int>>> lattices(
      game.NumPrincipals());
  std::vector<Block> blocks;
  double points = 1.0;
  for (int k = 0; k < game.NumPrincipals(); ++k) {
    if (k == j) continue;
    lattices[k] = Compositions(steps, game.NumActions(k));
    for (int x = 0; x < num_profiles; ++x) {
      blocks.push_back({k, x, &lattices[k]});
      points *= static_cast<double>(lattices[k].size());
    }
  }
  if (points > params.max_grid_points) {
    throw DimensionTooLarge("grid minmax: " + std::to_string(points) +
                            " lattice points exceed the cap");
  }

  const auto polys = BuildAll(game);
  const InnerMax inner(game, j, polys[j], params.dim_cap);
  std::vector<bool> constrained(game.NumPrincipals(), false);
  for (int k = 0; k < game.NumPrincipals(); ++k) {
    for (const IcRow& row : polys[k].ic_rows) {
      for (double c : row.coeffs) constrained[k] = constrained[k] || c != 0.0;
    }
  }

  MechanismProfile profile = UniformProfile(game);
  std::vector<size_t> digit(blocks.size(), 0);
  auto apply = [&](size_t b) {
    const Block& block = blocks[b];
    const auto& point = (*block.lattice)[digit[b]];
    for (size_t a = 0; a < point.size(); ++a) {
      profile[block.k].At(block.x, static_cast<int>(a)) = point[a] * step;
    }
  };
  for (size_t b = 0; b < blocks.size(); ++b) apply(b);

  double grid_min = std::numeric_limits<double>::infinity();
  double best_bic = std::numeric_limits<double>::infinity();
  MechanismProfile best_bic_profile;
  for (;;) {
    const double value = inner(profile);
    grid_min = std::min(grid_min, value);
    if (value < best_bic) {
      bool bic = true;
      for (int k = 0; k < game.NumPrincipals() && bic; ++k) {
        if (k == j || !constrained[k]) continue;
        bic = IsIndividuallyBic(polys[k], profile[k]).ok;
      }
      if (bic) {
        best_bic = value;
        best_bic_profile = profile;
      }
    }
    // Odometer over blocks, last block fastest.
    bool wrapped = true;
    for (size_t b = blocks.size(); b-- > 0;) {
      const bool carry = ++digit[b] == blocks[b].lattice->size();
      if (carry) digit[b] = 0;
      apply(b);
      if (!carry) {
        wrapped = false;
        break;
      }
    }
    if (wrapped) break;
  }

  const double mass = HalfRangePayoffMass(game, j);
  const double slack =
      mass * step *
      std::max(static_cast<double>(free_blocks) * free_dim,
               2.0 * action_excess);

  if (best_bic_profile.empty()) best_bic_profile = UniformProfile(game);
  BestResponse reply = ComputeBestResponse(game, polys[j], best_bic_profile);
  best_bic_profile[j] = std::move(reply.mechanism);

  ValueCertificate cert;
  cert.kind = CertificateKind::kGridCertifiedLowerBound;
  cert.principal = j;
  cert.value = grid_min - slack;
  cert.gap_bound = slack;
  cert.witness = std::move(best_bic_profile);
  cert.witness_value = reply.value;
  return cert;
}

ValueCertificate MinmaxAlternating(const FiniteGame& game, int j,
                                   const SolverParams& params) {
  CheckPrincipal(game, j);
  if (params.restarts < 1) throw InputError("restarts must be >= 1");
  const auto polys = BuildAll(game);
  const int num_principals = game.NumPrincipals();

  ValueCertificate best;
  best.kind = CertificateKind::kAlternatingUpperBound;
  best.principal = j;
  best.gap_bound = 0.0;
  best.value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < params.restarts; ++r) {
    MechanismProfile profile = UniformProfile(game);
    for (int k = 0; k < num_principals; ++k) {
      if (k != j) profile[k] = SampleBic(polys[k], DeriveSeed(params.seed + r, k));
    }
    double value = std::numeric_limits<double>::infinity();
    for (int round = 0; round < params.max_rounds; ++round) {
      const double before = value;
      for (int k = 0; k < num_principals; ++k) {
        if (k == j) continue;
        SaddleResult step = SolveSaddle(game, j, k, profile, polys[j], polys[k]);
        profile[k] = std::move(step.punisher);
        value = step.value;
      }
      if (before - value <= 1e-10) break;
    }
    BestResponse reply = ComputeBestResponse(game, polys[j], profile);
    profile[j] = std::move(reply.mechanism);
    const bool better =
        reply.value < best.value - 1e-12 ||
        (std::abs(reply.value - best.value) <= 1e-12 &&
         LexLess(profile, best.witness));
    if (better) {
      best.value = reply.value;
      best.witness_value = reply.value;
      best.witness = std::move(profile);
    }
  }
  return best;
}

ValueCertificate Minmax(const FiniteGame& game, int j, MinmaxMode mode,
                        const SolverParams& params) {
  switch (mode) {
    case MinmaxMode::kExact2:
      return MinmaxExact2(game, j);
    case MinmaxMode::kGrid:
      return MinmaxGrid(game, j, params);
    case MinmaxMode::kAlternating:
      return MinmaxAlternating(game, j, params);
  }
  throw ModeUnsupported("unknown minmax mode");
}

ValueCertificate Maxmin(const FiniteGame& game, int j,
                        const SolverParams& params) {
  CheckPrincipal(game, j);
  const auto polys = BuildAll(game);
  const int num_principals = game.NumPrincipals();

  std::vector<std::vector<DirectMechanism>> vertices(num_principals);
  std::vector<int> radices;
  double products = 1.0;
  try {
    for (int k = 0; k < num_principals; ++k) {
      if (k == j) continue;
      vertices[k] = EnumerateVertices(polys[k], params.dim_cap);
      radices.push_back(static_cast<int>(vertices[k].size()));
      products *= static_cast<double>(vertices[k].size());
    }
    if (products > kMaxVertexProducts) {
      throw DimensionTooLarge("maxmin: " + std::to_string(products) +
                              " vertex products exceed the cap");
    }
  } catch (const DimensionTooLarge&) {
    if (params.force_exact) throw;
    return MaxminHeuristic(game, j, polys, params);
  }

  const BicPolytope& own = polys[j];
  const MixedRadix space(radices);
  std::vector<std::vector<double>> coefficients;
  MechanismProfile profile = UniformProfile(game);
  auto select = [&](int w) {
    int pos = 0;
    for (int k = 0; k < num_principals; ++k) {
      if (k == j) continue;
      profile[k] = vertices[k][space.Digit(w, pos++)];
    }
  };
  for (int w = 0; w < space.Size(); ++w) {
    select(w);
    coefficients.push_back(LinearPayoffCoefficients(game, j, profile, j));
  }

  LpProblem lp(own.NumVariables(), Sense::kMaximize);
  const int t = lp.AddVariable(-kInfinity, kInfinity, 1.0);
  AppendPolytopeRows(own, 0, lp);
  for (const auto& c : coefficients) {
    std::vector<double> coeffs(lp.NumVariables(), 0.0);
    for (size_t e = 0; e < c.size(); ++e) coeffs[e] = -c[e];
    coeffs[t] = 1.0;
    lp.AddRow(std::move(coeffs), Relation::kLessEqual, 0.0);
  }
  const LpSolution sol = SolveLpOrThrow(lp, "maxmin vertex-product LP");
  DirectMechanism mine = ToMechanism(
      j, own.num_actions,
      std::span<const double>(sol.x.data(), own.NumVariables()));

  int argmin = 0;
  double inner = std::numeric_limits<double>::infinity();
  for (int w = 0; w < space.Size(); ++w) {
    const double value = Dot(coefficients[w], mine.probs);
    if (value < inner - 1e-12) {
      inner = value;
      argmin = w;
    }
  }
  select(argmin);
  profile[j] = std::move(mine);

  ValueCertificate cert;
  cert.kind = CertificateKind::kVertexProductExact;
  cert.principal = j;
  cert.value = sol.value;
  cert.gap_bound = 0.0;
  cert.witness = std::move(profile);
  cert.witness_value = inner;
  return cert;
}

Punishment PunishmentProfile(const FiniteGame& game, int j, MinmaxMode mode,
                             const SolverParams& params) {
  const ValueCertificate cert = Minmax(game, j, mode, params);
  Punishment out;
  out.profile = cert.witness;
  out.value = cert.witness_value;
  out.kind = cert.kind;
  return out;
}

MembershipResult RobustPbeMembership(
    const FiniteGame& game, const MechanismProfile& profile,
    const std::vector<ValueCertificate>& certificates, double tol) {
  if (static_cast<int>(certificates.size()) != game.NumPrincipals()) {
    throw InputError("membership needs one certificate per principal");
  }
  MembershipResult result;
  result.bic = IsProfileBic(game, profile);

  bool hard_failure = !result.bic.ok;
  bool soft_failure = false;
  bool all_exact = true;
  for (int j = 0; j < game.NumPrincipals(); ++j) {
    const ValueCertificate& cert = certificates[j];
    if (cert.principal != j) {
      throw InputError("certificate " + std::to_string(j + 1) +
                       " belongs to another principal");
    }
    PrincipalSlack s;
    s.principal = j;
    s.kind = cert.kind;
    s.payoff = ExpectedPrincipalPayoff(game, j, profile);
    s.threshold = cert.value - std::max(cert.gap_bound, 0.0);
    s.slack = s.payoff - s.threshold;
    s.passes = s.slack >= -tol;
    result.principals.push_back(s);

    // A maxmin value is a lower bound on the minmax value, equal to it when
    // there are two principals.
    bool exact = cert.kind == CertificateKind::kExactLp ||
                 (cert.kind == CertificateKind::kVertexProductExact &&
                  game.NumPrincipals() == 2);
    if (exact && cert.gap_bound > 0.0) exact = false;
    const bool lower = cert.kind == CertificateKind::kGridCertifiedLowerBound ||
                       cert.kind == CertificateKind::kVertexProductExact;
    all_exact = all_exact && exact;
    if (!s.passes) {
      if (exact || lower) {
        hard_failure = true;
      } else {
        soft_failure = true;
      }
    }
  }
  if (hard_failure) {
    result.verdict = MembershipVerdict::kNonMember;
  } else if (soft_failure) {
    result.verdict = MembershipVerdict::kInconclusive;
  } else if (all_exact) {
    result.verdict = MembershipVerdict::kMember;
  } else {
    result.verdict = MembershipVerdict::kConsistentWithMembership;
  }
  return result;
}

GapSearchResult SearchMinmaxMaxminGap(const GapSearchParams& params) {
  if (params.budget < 0) throw InputError("budget must be >= 0");
  GapSearchResult result;
  result.gap = -std::numeric_limits<double>::infinity();
  SolverParams solver = params.solver;
  solver.grid_step = params.grid_step;
  solver.force_exact = true;

  for (int n = 0; n < params.budget; ++n) {
    const std::uint64_t seed = DeriveSeed(params.seed, n);
    FiniteGame game;
    switch (params.family) {
      case GapFamily::kGap3:
        game = MakeGap3Instance(seed);
        break;
      case GapFamily::kConstant: {
        game = MakeZeroGame({1, 1, 1}, {2, 2, 2});
        Rng rng(seed);
        for (auto& table : game.principal_payoffs) {
          std::fill(table.begin(), table.end(), rng.Uniform());
        }
        break;
      }
      case GapFamily::kRandom:
        game = MakeRandomGame(params.random_spec, seed);
        break;
    }

    bool evaluated = false;
    double instance_gap = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < game.NumPrincipals(); ++j) {
      ValueCertificate low, high;
      try {
        low = Maxmin(game, j, solver);
        high = MinmaxGrid(game, j, solver);
      } catch (const DimensionTooLarge&) {
        continue;
      }
      evaluated = true;
      const double gap = high.value - low.value;
      instance_gap = std::max(instance_gap, gap);
      if (gap > result.gap) {
        result.found = true;
        result.gap = gap;
        result.best_index = n;
        result.best_seed = seed;
        result.best_game = game;
        result.best_principal = j;
        result.maxmin = low.value;
        result.minmax_lower_bound = high.value;
        result.minmax_upper_bound = high.witness_value;
        result.maxmin_certificate = low;
        result.minmax_certificate = high;
      }
    }
    if (evaluated) {
      ++result.evaluated;
      if (instance_gap > 0.01) ++result.instances_above_001;
    }
  }
  if (!result.found) result.gap = 0.0;
  return result;
}

}  // namespace mechpoly
