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

#include "mechpoly/bic.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "mechpoly/errors.h"
#include "mechpoly/random.h"

namespace mechpoly {
namespace {

// Above this many (report tuple x joint action) evaluations per agent type
// IsProfileBic falls back to the separable per-principal check.
constexpr double kJointEnumerationCap = 4e6;

std::string FormatCoefficient(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double RowValue(const IcRow& row, const DirectMechanism& mech) {
  double value = 0.0;
  for (size_t e = 0; e < row.coeffs.size(); ++e) {
    value += row.coeffs[e] * mech.probs[e];
  }
  return value;
}

}  // namespace

BicPolytope BuildBicPolytope(const FiniteGame& game, int j) {
  if (j < 0 || j >= game.NumPrincipals()) {
    throw InputError("principal index out of range");
  }
  BicPolytope poly;
  poly.owner = j;
  poly.num_profiles = game.NumTypeProfiles();
  poly.num_actions = game.NumActions(j);
  const int num_actions = poly.num_actions;

  const TypeProfileTable table(game);
  for (int i = 0; i < game.NumAgents(); ++i) {
    const MixedRadix others = OthersTypeSpace(game, i);
    for (int truth = 0; truth < game.NumTypes(i); ++truth) {
      if (!game.HasPositiveMass(i, truth)) continue;
      const std::vector<double> cond = ConditionalPrior(game, i, truth);
      for (int report = 0; report < game.NumTypes(i); ++report) {
        if (report == truth) continue;
        IcRow row{i, truth, report,
                  std::vector<double>(poly.NumVariables(), 0.0)};
        for (int o = 0; o < others.Size(); ++o) {
          const double w = cond[o];
          if (w == 0.0) continue;
          const int x = table.Compose(i, truth, o);
          const int lie = table.Compose(i, report, o);
          for (int a = 0; a < num_actions; ++a) {
            // Utility is evaluated at the true profile x in both terms.
            const double u = w * game.AgentPayoff(i, j, a, x);
            row.coeffs[poly.Var(x, a)] += u;
            row.coeffs[poly.Var(lie, a)] -= u;
          }
        }
        poly.ic_rows.push_back(std::move(row));
      }
    }
  }
  return poly;
}

std::string ExportHRepresentation(const BicPolytope& poly) {
  std::ostringstream out;
  out << "# owner " << poly.owner + 1 << " variables " << poly.NumVariables()
      << " (x * " << poly.num_actions << " + a), all variables >= 0\n";
  for (int x = 0; x < poly.num_profiles; ++x) {
    for (int v = 0; v < poly.NumVariables(); ++v) {
      if (v > 0) out << ' ';
      out << (v / poly.num_actions == x ? "1" : "0");
    }
    out << " = 1\n";
  }
  for (const IcRow& row : poly.ic_rows) {
    for (size_t v = 0; v < row.coeffs.size(); ++v) {
      if (v > 0) out << ' ';
      out << FormatCoefficient(row.coeffs[v] == 0.0 ? 0.0 : row.coeffs[v]);
    }
    out << " >= 0\n";
  }
  return out.str();
}

void AppendPolytopeRows(const BicPolytope& poly, int first_var, LpProblem& lp) {
  const int n = lp.NumVariables();
  if (first_var < 0 || first_var + poly.NumVariables() > n) {
    throw InputError("polytope variables out of LP range");
  }
  for (int x = 0; x < poly.num_profiles; ++x) {
    std::vector<double> coeffs(n, 0.0);
    for (int a = 0; a < poly.num_actions; ++a) {
      coeffs[first_var + poly.Var(x, a)] = 1.0;
    }
    lp.AddRow(std::move(coeffs), Relation::kEqual, 1.0);
  }
  for (const IcRow& row : poly.ic_rows) {
    bool nonzero = false;
    std::vector<double> coeffs(n, 0.0);
    for (int v = 0; v < poly.NumVariables(); ++v) {
      coeffs[first_var + v] = row.coeffs[v];
      nonzero = nonzero || row.coeffs[v] != 0.0;
    }
    if (nonzero) lp.AddRow(std::move(coeffs), Relation::kGreaterEqual, 0.0);
  }
}

BicVerdict IsIndividuallyBic(const BicPolytope& poly,
                             const DirectMechanism& mech, double tol) {
  if (mech.num_actions != poly.num_actions ||
      mech.NumProfiles() != poly.num_profiles) {
    throw InputError("mechanism does not match polytope dimensions");
  }
  BicVerdict verdict;
  for (const IcRow& row : poly.ic_rows) {
    const double value = RowValue(row, mech);
    if (!verdict.worst || value < verdict.worst->value) {
      verdict.worst = IcWitness{row.agent, row.truth, row.report, value};
    }
  }
  verdict.ok = !verdict.worst || verdict.worst->value >= -tol;
  return verdict;
}

BicVerdict IsIndividuallyBic(const FiniteGame& game, int j,
                             const DirectMechanism& mech, double tol) {
  return IsIndividuallyBic(BuildBicPolytope(game, j), mech, tol);
}

ProfileBicVerdict IsProfileBic(const FiniteGame& game,
                               const MechanismProfile& profile, double tol) {
  CheckMechanismProfile(game, profile);
  const int num_principals = game.NumPrincipals();
  const MixedRadix actions = game.ActionSpace();
  const TypeProfileTable table(game);
  ProfileBicVerdict verdict;
  verdict.value = 0.0;

  // U_i at profile x when principal k draws from dists[k], by enumerating
  // joint action profiles.
  auto joint_utility = [&](int i, int x,
                           const std::vector<std::span<const double>>& dists) {
    double u = 0.0;
    for (int a = 0; a < actions.Size(); ++a) {
      double prob = 1.0;
      double total = 0.0;
      for (int k = 0; k < num_principals; ++k) {
        const int ak = actions.Digit(a, k);
        prob *= dists[k][ak];
        total += game.AgentPayoff(i, k, ak, x);
      }
      u += prob * total;
    }
    return u;
  };

  for (int i = 0; i < game.NumAgents(); ++i) {
    const int num_types = game.NumTypes(i);
    const MixedRadix others = OthersTypeSpace(game, i);
    const MixedRadix reports(std::vector<int>(num_principals, num_types));
    for (int truth = 0; truth < num_types; ++truth) {
      if (!game.HasPositiveMass(i, truth)) continue;
      const std::vector<double> cond = ConditionalPrior(game, i, truth);
      const double work = static_cast<double>(reports.Size()) * actions.Size();
      if (work <= kJointEnumerationCap) {
        std::vector<double> truthful(others.Size(), 0.0);
        std::vector<std::span<const double>> dists(num_principals);
        for (int o = 0; o < others.Size(); ++o) {
          if (cond[o] == 0.0) continue;
          const int x = table.Compose(i, truth, o);
          for (int k = 0; k < num_principals; ++k) dists[k] = profile[k].Row(x);
          truthful[o] = joint_utility(i, x, dists);
        }
        for (int r = 0; r < reports.Size(); ++r) {
          double gain = 0.0;
          for (int o = 0; o < others.Size(); ++o) {
            if (cond[o] == 0.0) continue;
            const int x = table.Compose(i, truth, o);
            for (int k = 0; k < num_principals; ++k) {
              const int shown =
                  table.Compose(i, reports.Digit(r, k), o);
              dists[k] = profile[k].Row(shown);
            }
            gain += cond[o] * (truthful[o] - joint_utility(i, x, dists));
          }
          if (gain < verdict.value) {
            verdict.value = gain;
            verdict.agent = i;
            verdict.truth = truth;
            verdict.reports = reports.Decode(r);
          }
        }
      } else {
        // Separable objective: the worst joint misreport combines the worst
        // report to each principal independently.
        verdict.joint_enumeration = false;
        std::vector<int> worst_reports(num_principals, truth);
        double total = 0.0;
        for (int k = 0; k < num_principals; ++k) {
          double worst = 0.0;
          for (int report = 0; report < num_types; ++report) {
            double gain = 0.0;
            for (int o = 0; o < others.Size(); ++o) {
              if (cond[o] == 0.0) continue;
              const int x = table.Compose(i, truth, o);
              const int shown = table.Compose(i, report, o);
              gain += cond[o] *
                      (ExpectedAgentComponent(game, i, k, profile[k].Row(x), x) -
                       ExpectedAgentComponent(game, i, k, profile[k].Row(shown),
                                              x));
            }
            if (gain < worst) {
              worst = gain;
              worst_reports[k] = report;
            }
          }
          total += worst;
        }
        if (total < verdict.value) {
          verdict.value = total;
          verdict.agent = i;
          verdict.truth = truth;
          verdict.reports = worst_reports;
        }
      }
    }
  }
  verdict.ok = verdict.value >= -tol;
  return verdict;
}

DirectMechanism SampleBic(const BicPolytope& poly, std::uint64_t seed) {
  Rng rng(seed);
  LpProblem lp(poly.NumVariables(), Sense::kMaximize);
  for (double& c : lp.objective) c = rng.Uniform(-1.0, 1.0);
  AppendPolytopeRows(poly, 0, lp);
  const LpSolution sol = SolveLpOrThrow(lp, "SampleBic");
  DirectMechanism mech;
  mech.owner = poly.owner;
  mech.num_actions = poly.num_actions;
  mech.probs = sol.x;
  for (double& p : mech.probs) {
    if (std::abs(p) < 1e-12) p = 0.0;
    if (std::abs(p - 1.0) < 1e-12) p = 1.0;
  }
  return mech;
}

}  // namespace mechpoly
