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

#include "mechpoly/lp.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "mechpoly/errors.h"

namespace mechpoly {
namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kOptimalityEps = 1e-10;
constexpr double kResidualTol = 1e-9;
constexpr double kGapTol = 1e-7;
constexpr int kMaxIterations = 200000;
constexpr int kDegenerateRunBeforeBland = 50;

// Original variable x_v = offset + sum sign * z_col over its columns.
struct VariableMap {
  double offset = 0.0;
  int col = -1;
  double sign = 1.0;
  int neg_col = -1;  // free variables: x = z_col - z_neg_col
};

// Standard form: min cost^T z, A z (rel) b with b >= 0, z >= 0, with slack,
// surplus and artificial columns appended after the structural ones.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows + 1) *
                                        (cols + 1), 0.0) {}

  double& At(int r, int c) { return data_[Index(r, c)]; }
  double At(int r, int c) const { return data_[Index(r, c)]; }
  double& Rhs(int r) { return At(r, cols_); }
  double Rhs(int r) const { return At(r, cols_); }
  // Row `rows_` holds reduced costs; its rhs entry holds -objective.
  double& Cost(int c) { return At(rows_, c); }
  double Cost(int c) const { return At(rows_, c); }

  void Pivot(int pr, int pc) {
    const double inv = 1.0 / At(pr, pc);
    for (int c = 0; c <= cols_; ++c) At(pr, c) *= inv;
    At(pr, pc) = 1.0;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double factor = At(r, pc);
      if (factor == 0.0) continue;
      double* dst = &data_[Index(r, 0)];
      const double* src = &data_[Index(pr, 0)];
      for (int c = 0; c <= cols_; ++c) dst[c] -= factor * src[c];
      At(r, pc) = 0.0;
    }
  }

 private:
  size_t Index(int r, int c) const {
    return static_cast<size_t>(r) * (cols_ + 1) + c;
  }
  int rows_;
  int cols_;
  std::vector<double> data_;
};

class SimplexSolver {
 public:
  explicit SimplexSolver(const LpProblem& p) : problem_(p) { BuildStandardForm(); }

  LpSolution Solve() {
    LpSolution sol;
    if (!RunPhaseOne()) {
      sol.status = LpStatus::kInfeasible;
      sol.iterations = iterations_;
      return sol;
    }
    if (!RunPhaseTwo()) {
      sol.status = LpStatus::kUnbounded;
      sol.iterations = iterations_;
      return sol;
    }
    std::vector<double> z = BasicSolution();
    std::vector<double> y = DualsFromTableau();
    Finish(z, y, sol);
    if (sol.primal_residual > kResidualTol || sol.duality_gap > GapBound(sol)) {
      Refine(z, y);
      Finish(z, y, sol);
      if (sol.primal_residual > kResidualTol ||
          sol.duality_gap > GapBound(sol)) {
        throw NumericalFailure(
            "simplex residual " + std::to_string(sol.primal_residual) +
            ", duality gap " + std::to_string(sol.duality_gap) +
            " after refinement");
      }
    }
    sol.status = LpStatus::kOptimal;
    sol.iterations = iterations_;
    return sol;
  }

 private:
  static double GapBound(const LpSolution& sol) {
    return kGapTol * (1.0 + std::abs(sol.value));
  }

  void BuildStandardForm() {
    const int n = problem_.NumVariables();
    if (static_cast<int>(problem_.lower.size()) != n ||
        static_cast<int>(problem_.upper.size()) != n) {
      throw InputError("LP bounds do not match variable count");
    }
    vars_.resize(n);
    int structural = 0;
    std::vector<std::pair<int, double>> upper_rows;  // (col, bound)
    for (int v = 0; v < n; ++v) {
      const double lo = problem_.lower[v];
      const double hi = problem_.upper[v];
      if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
        throw InputError("LP variable " + std::to_string(v) +
                         " has invalid bounds");
      }
      VariableMap& map = vars_[v];
      if (std::isfinite(lo)) {
        map.offset = lo;
        map.col = structural++;
        if (std::isfinite(hi)) upper_rows.emplace_back(map.col, hi - lo);
      } else if (std::isfinite(hi)) {
        map.offset = hi;
        map.sign = -1.0;
        map.col = structural++;
      } else {
        map.col = structural++;
        map.neg_col = structural++;
      }
    }
    num_structural_ = structural;

    struct StdRow {
      std::vector<double> a;
      Relation rel;
      double b;
      double flip;
    };
    std::vector<StdRow> rows;
    const double kSense = problem_.sense == Sense::kMaximize ? -1.0 : 1.0;
    for (const LpRow& row : problem_.rows) {
      if (static_cast<int>(row.coeffs.size()) != n) {
        throw InputError("LP row length does not match variable count");
      }
      StdRow s{std::vector<double>(structural, 0.0), row.relation, row.rhs,
               1.0};
      for (int v = 0; v < n; ++v) {
        const double c = row.coeffs[v];
        if (c == 0.0) continue;
        if (!std::isfinite(c)) throw InputError("non-finite LP coefficient");
        const VariableMap& map = vars_[v];
        s.a[map.col] += c * map.sign;
        if (map.neg_col >= 0) s.a[map.neg_col] -= c;
        s.b -= c * map.offset;
      }
      rows.push_back(std::move(s));
    }
    for (auto [col, bound] : upper_rows) {
      StdRow s{std::vector<double>(structural, 0.0), Relation::kLessEqual,
               bound, 1.0};
      s.a[col] = 1.0;
      rows.push_back(std::move(s));
    }
    for (StdRow& s : rows) {
      if (s.b < 0.0) {
        for (double& c : s.a) c = -c;
        s.b = -s.b;
        s.flip = -1.0;
        if (s.rel == Relation::kLessEqual) {
          s.rel = Relation::kGreaterEqual;
        } else if (s.rel == Relation::kGreaterEqual) {
          s.rel = Relation::kLessEqual;
        }
      }
    }

    num_rows_ = static_cast<int>(rows.size());
    num_original_rows_ = static_cast<int>(problem_.rows.size());
    int slack_cols = 0;
    int artificial_cols = 0;
    for (const StdRow& s : rows) {
      if (s.rel != Relation::kEqual) ++slack_cols;
      if (s.rel != Relation::kLessEqual) ++artificial_cols;
    }
    first_artificial_ = num_structural_ + slack_cols;
    num_cols_ = first_artificial_ + artificial_cols;

    cost_.assign(num_cols_, 0.0);
    objective_offset_ = 0.0;
    for (int v = 0; v < n; ++v) {
      const double c = kSense * problem_.objective[v];
      if (!std::isfinite(c)) throw InputError("non-finite LP objective");
      const VariableMap& map = vars_[v];
      cost_[map.col] += c * map.sign;
      if (map.neg_col >= 0) cost_[map.neg_col] -= c;
      objective_offset_ += c * map.offset;
    }

    a_ = Eigen::MatrixXd::Zero(num_rows_, num_cols_);
    b_ = Eigen::VectorXd::Zero(num_rows_);
    row_flip_.resize(num_rows_);
    identity_col_.resize(num_rows_);
    basis_.resize(num_rows_);
    int next_slack = num_structural_;
    int next_art = first_artificial_;
    for (int r = 0; r < num_rows_; ++r) {
      for (int c = 0; c < num_structural_; ++c) a_(r, c) = rows[r].a[c];
      b_(r) = rows[r].b;
      row_flip_[r] = rows[r].flip;
      switch (rows[r].rel) {
        case Relation::kLessEqual:
          a_(r, next_slack) = 1.0;
          identity_col_[r] = next_slack;
          basis_[r] = next_slack++;
          break;
        case Relation::kGreaterEqual:
          a_(r, next_slack++) = -1.0;
          a_(r, next_art) = 1.0;
          identity_col_[r] = next_art;
          basis_[r] = next_art++;
          break;
        case Relation::kEqual:
          a_(r, next_art) = 1.0;
          identity_col_[r] = next_art;
          basis_[r] = next_art++;
          break;
      }
    }
    tableau_ = Tableau(num_rows_, num_cols_);
    for (int r = 0; r < num_rows_; ++r) {
      for (int c = 0; c < num_cols_; ++c) tableau_.At(r, c) = a_(r, c);
      tableau_.Rhs(r) = b_(r);
    }
  }

  void LoadCosts(const std::vector<double>& cost) {
    for (int c = 0; c < num_cols_; ++c) tableau_.Cost(c) = cost[c];
    tableau_.Rhs(num_rows_) = 0.0;
    for (int r = 0; r < num_rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (int c = 0; c <= num_cols_; ++c) {
        tableau_.At(num_rows_, c) -= cb * tableau_.At(r, c);
      }
    }
  }

  // Returns false if unbounded.
  bool Iterate(bool allow_artificial) {
    int degenerate_run = 0;
    while (true) {
      if (++iterations_ > kMaxIterations) {
        throw NumericalFailure("simplex iteration limit reached");
      }
      const int limit = allow_artificial ? num_cols_ : first_artificial_;
      const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
      int enter = -1;
      double best = -kOptimalityEps;
      for (int c = 0; c < limit; ++c) {
        const double d = tableau_.Cost(c);
        if (d < best) {
          enter = c;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return true;

      double best_ratio = kInfinity;
      for (int r = 0; r < num_rows_; ++r) {
        const double a = tableau_.At(r, enter);
        if (a <= kPivotEps) continue;
        best_ratio = std::min(best_ratio, std::max(tableau_.Rhs(r), 0.0) / a);
      }
      if (best_ratio == kInfinity) return false;
      // Among near-minimal ratios, the smallest basic index leaves.
      int leave = -1;
      const double cutoff = best_ratio + 1e-12 * (1.0 + best_ratio);
      for (int r = 0; r < num_rows_; ++r) {
        const double a = tableau_.At(r, enter);
        if (a <= kPivotEps) continue;
        if (std::max(tableau_.Rhs(r), 0.0) / a > cutoff) continue;
        if (leave < 0 || basis_[r] < basis_[leave]) leave = r;
      }
      degenerate_run = best_ratio <= 1e-12 ? degenerate_run + 1 : 0;
      tableau_.Pivot(leave, enter);
      basis_[leave] = enter;
    }
  }

  bool RunPhaseOne() {
    std::vector<double> cost(num_cols_, 0.0);
    for (int c = first_artificial_; c < num_cols_; ++c) cost[c] = 1.0;
    LoadCosts(cost);
    Iterate(/*allow_artificial=*/true);
    const double infeasibility = -tableau_.Rhs(num_rows_);
    double scale = 1.0;
    for (int r = 0; r < num_rows_; ++r) scale = std::max(scale, b_(r));
    if (infeasibility > 1e-9 * scale) return false;

    // Drive remaining artificials out of the basis where possible.
    for (int r = 0; r < num_rows_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      int pc = -1;
      double best = 1e-9;
      for (int c = 0; c < first_artificial_; ++c) {
        const double a = std::abs(tableau_.At(r, c));
        if (a > best) {
          best = a;
          pc = c;
        }
      }
      if (pc >= 0) {
        tableau_.Pivot(r, pc);
        basis_[r] = pc;
      }
    }
    return true;
  }

  bool RunPhaseTwo() {
    LoadCosts(cost_);
    return Iterate(/*allow_artificial=*/false);
  }

  std::vector<double> BasicSolution() const {
    std::vector<double> z(num_cols_, 0.0);
    for (int r = 0; r < num_rows_; ++r) {
      z[basis_[r]] = std::max(tableau_.Rhs(r), 0.0);
    }
    return z;
  }

  std::vector<double> DualsFromTableau() const {
    std::vector<double> y(num_rows_);
    for (int r = 0; r < num_rows_; ++r) {
      const int c = identity_col_[r];
      const double base_cost = c < first_artificial_ ? cost_[c] : 0.0;
      y[r] = base_cost - tableau_.Cost(c);
    }
    return y;
  }

  // Recomputes basic values and duals from the original columns.
  void Refine(std::vector<double>& z, std::vector<double>& y) const {
    Eigen::MatrixXd basis(num_rows_, num_rows_);
    Eigen::VectorXd cb(num_rows_);
    for (int r = 0; r < num_rows_; ++r) {
      basis.col(r) = a_.col(basis_[r]);
      cb(r) = basis_[r] < first_artificial_ ? cost_[basis_[r]] : 0.0;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
    Eigen::VectorXd zb = lu.solve(b_);
    Eigen::VectorXd yy = lu.transpose().solve(cb);
    std::fill(z.begin(), z.end(), 0.0);
    for (int r = 0; r < num_rows_; ++r) {
      z[basis_[r]] = zb(r) < 0.0 && zb(r) > -kResidualTol ? 0.0 : zb(r);
      y[r] = yy(r);
    }
  }

  void Finish(const std::vector<double>& z, const std::vector<double>& y,
              LpSolution& sol) const {
    const int n = problem_.NumVariables();
    sol.x.assign(n, 0.0);
    for (int v = 0; v < n; ++v) {
      const VariableMap& map = vars_[v];
      double x = map.offset + map.sign * z[map.col];
      if (map.neg_col >= 0) x -= z[map.neg_col];
      sol.x[v] = x;
    }
    double value = 0.0;
    for (int v = 0; v < n; ++v) value += problem_.objective[v] * sol.x[v];
    sol.value = value;

    double residual = 0.0;
    for (const LpRow& row : problem_.rows) {
      double lhs = 0.0;
      for (int v = 0; v < n; ++v) lhs += row.coeffs[v] * sol.x[v];
      double viol = 0.0;
      switch (row.relation) {
        case Relation::kLessEqual: viol = lhs - row.rhs; break;
        case Relation::kGreaterEqual: viol = row.rhs - lhs; break;
        case Relation::kEqual: viol = std::abs(lhs - row.rhs); break;
      }
      residual = std::max(residual, viol / (1.0 + std::abs(row.rhs)));
    }
    for (int v = 0; v < n; ++v) {
      const double lo = problem_.lower[v];
      const double hi = problem_.upper[v];
      if (std::isfinite(lo)) {
        residual = std::max(residual, (lo - sol.x[v]) / (1.0 + std::abs(lo)));
      }
      if (std::isfinite(hi)) {
        residual = std::max(residual, (sol.x[v] - hi) / (1.0 + std::abs(hi)));
      }
    }
    sol.primal_residual = std::max(residual, 0.0);

    // Standard-form duality gap: min cost^T z versus max b^T y.
    double primal = 0.0;
    for (int c = 0; c < num_cols_; ++c) primal += cost_[c] * z[c];
    double dual = 0.0;
    for (int r = 0; r < num_rows_; ++r) dual += b_(r) * y[r];
    sol.duality_gap = std::abs(primal - dual);

    const double kSense = problem_.sense == Sense::kMaximize ? -1.0 : 1.0;
    sol.duals.assign(num_original_rows_, 0.0);
    for (int r = 0; r < num_original_rows_; ++r) {
      sol.duals[r] = kSense * row_flip_[r] * y[r];
    }
  }

  const LpProblem& problem_;
  std::vector<VariableMap> vars_;
  int num_structural_ = 0;
  int num_rows_ = 0;
  int num_original_rows_ = 0;
  int num_cols_ = 0;
  int first_artificial_ = 0;
  std::vector<double> cost_;
  double objective_offset_ = 0.0;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  std::vector<double> row_flip_;
  std::vector<int> identity_col_;
  std::vector<int> basis_;
  Tableau tableau_{0, 0};
  int iterations_ = 0;
};

}  // namespace

int LpProblem::AddVariable(double lo, double hi, double cost) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  for (LpRow& row : rows) row.coeffs.push_back(0.0);
  return NumVariables() - 1;
}

void LpProblem::AddRow(std::vector<double> coeffs, Relation relation,
                       double rhs) {
  if (static_cast<int>(coeffs.size()) != NumVariables()) {
    throw InputError("LP row length does not match variable count");
  }
  rows.push_back(LpRow{std::move(coeffs), relation, rhs});
}

std::string ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

LpSolution SolveLp(const LpProblem& problem) {
  SimplexSolver solver(problem);
  return solver.Solve();
}

LpSolution SolveLpOrThrow(const LpProblem& problem, const char* what) {
  LpSolution sol = SolveLp(problem);
  if (sol.status != LpStatus::kOptimal) {
    throw NumericalFailure(std::string(what) + ": LP " + ToString(sol.status));
  }
  return sol;
}

}  // namespace mechpoly
