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

// Incremental double-description enumeration of BIC polytope vertices.
//
// The simplex equalities are eliminated by writing the last action's
// probability at every type profile as one minus the others. In the
// remaining coordinates y the polytope is {y : H (y, 1) >= 0}; it is
// homogenized to the pointed cone {(y, t) : H (y, t) >= 0, y >= 0, t >= 0}
// whose extreme rays with t > 0 are the vertices. The iteration starts
// from the nonnegative orthant and adds one halfspace at a time, keeping
// the extreme rays and combining adjacent pairs across the new hyperplane
// (combinatorial adjacency test).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mechpoly/bic.h"
#include "mechpoly/errors.h"

namespace mechpoly {
namespace {

constexpr double kZeroTol = 1e-10;
constexpr double kSnapTol = 1e-9;

class Bitset {
 public:
  explicit Bitset(int bits = 0) : words_((bits + 63) / 64, 0) {}
  void Set(int b) { words_[b / 64] |= std::uint64_t{1} << (b % 64); }
  void Resize(int bits) { words_.resize((bits + 63) / 64, 0); }
  int Count() const {
    int n = 0;
    for (auto w : words_) n += __builtin_popcountll(w);
    return n;
  }
  bool SubsetOf(const Bitset& other) const {
    for (size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] & ~other.words_[w]) return false;
    }
    return true;
  }
  Bitset And(const Bitset& other) const {
    Bitset out = *this;
    for (size_t w = 0; w < words_.size(); ++w) out.words_[w] &= other.words_[w];
    return out;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  std::vector<double> v;
  Bitset zeros;
};

void Normalize(std::vector<double>& v) {
  double scale = 0.0;
  for (double c : v) scale = std::max(scale, std::abs(c));
  if (scale > 0.0) {
    for (double& c : v) c /= scale;
  }
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

bool LexLess(const DirectMechanism& a, const DirectMechanism& b) {
  return std::lexicographical_compare(a.probs.begin(), a.probs.end(),
                                      b.probs.begin(), b.probs.end());
}

bool Close(const DirectMechanism& a, const DirectMechanism& b) {
  for (size_t e = 0; e < a.probs.size(); ++e) {
    if (std::abs(a.probs[e] - b.probs[e]) > kSnapTol) return false;
  }
  return true;
}

}  // namespace

std::vector<DirectMechanism> EnumerateVertices(const BicPolytope& poly,
                                               int dim_cap) {
  if (poly.NumVariables() > dim_cap) {
    throw DimensionTooLarge("polytope has " +
                            std::to_string(poly.NumVariables()) +
                            " variables, cap is " + std::to_string(dim_cap));
  }
  const int num_actions = poly.num_actions;
  const int free_per_profile = num_actions - 1;
  const int d = poly.num_profiles * free_per_profile;
  auto free_index = [&](int x, int a) { return x * free_per_profile + a; };

  auto to_mechanism = [&](const std::vector<double>& y) {
    DirectMechanism mech;
    mech.owner = poly.owner;
    mech.num_actions = num_actions;
    mech.probs.assign(poly.NumVariables(), 0.0);
    for (int x = 0; x < poly.num_profiles; ++x) {
      double rest = 1.0;
      for (int a = 0; a < free_per_profile; ++a) {
        const double p = y[free_index(x, a)];
        mech.At(x, a) = p;
        rest -= p;
      }
      mech.At(x, num_actions - 1) = rest;
    }
    for (double& p : mech.probs) {
      if (std::abs(p) < kSnapTol) p = 0.0;
      if (std::abs(p - 1.0) < kSnapTol) p = 1.0;
    }
    return mech;
  };

  if (d == 0) return {to_mechanism({})};

  const int dim = d + 1;  // (y, t)
  std::vector<std::vector<double>> halfspaces;
  auto add_halfspace = [&](std::vector<double> h) {
    Normalize(h);
    double scale = 0.0;
    for (double c : h) scale = std::max(scale, std::abs(c));
    if (scale < 1e-12) return;  // 0 >= 0
    for (const auto& existing : halfspaces) {
      bool same = true;
      for (int k = 0; k < dim && same; ++k) {
        same = std::abs(existing[k] - h[k]) <= 1e-12;
      }
      if (same) return;
    }
    halfspaces.push_back(std::move(h));
  };
  for (int x = 0; x < poly.num_profiles; ++x) {
    std::vector<double> h(dim, 0.0);
    for (int a = 0; a < free_per_profile; ++a) h[free_index(x, a)] = -1.0;
    h[d] = 1.0;
    add_halfspace(std::move(h));
  }
  for (const IcRow& row : poly.ic_rows) {
    std::vector<double> h(dim, 0.0);
    for (int x = 0; x < poly.num_profiles; ++x) {
      const double last = row.coeffs[poly.Var(x, num_actions - 1)];
      for (int a = 0; a < free_per_profile; ++a) {
        h[free_index(x, a)] = row.coeffs[poly.Var(x, a)] - last;
      }
      h[d] += last;
    }
    add_halfspace(std::move(h));
  }

  const int total = dim + static_cast<int>(halfspaces.size());
  std::vector<Ray> rays;
  for (int k = 0; k < dim; ++k) {
    Ray r{std::vector<double>(dim, 0.0), Bitset(total)};
    r.v[k] = 1.0;
    for (int c = 0; c < dim; ++c) {
      if (c != k) r.zeros.Set(c);
    }
    rays.push_back(std::move(r));
  }

  for (size_t h = 0; h < halfspaces.size(); ++h) {
    const int id = dim + static_cast<int>(h);
    std::vector<double> slack(rays.size());
    std::vector<int> plus, minus;
    std::vector<Ray> next;
    for (size_t r = 0; r < rays.size(); ++r) {
      slack[r] = Dot(halfspaces[h], rays[r].v);
      if (slack[r] > kZeroTol) {
        plus.push_back(static_cast<int>(r));
      } else if (slack[r] < -kZeroTol) {
        minus.push_back(static_cast<int>(r));
      } else {
        rays[r].zeros.Set(id);
      }
    }
    if (minus.empty()) continue;
    for (size_t r = 0; r < rays.size(); ++r) {
      if (slack[r] >= -kZeroTol) next.push_back(rays[r]);
    }
    for (int p : plus) {
      for (int n : minus) {
        const Bitset common = rays[p].zeros.And(rays[n].zeros);
        if (common.Count() < dim - 2) continue;
        bool adjacent = true;
        for (size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (static_cast<int>(r) == p || static_cast<int>(r) == n) continue;
          if (common.SubsetOf(rays[r].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        Ray ray{std::vector<double>(dim), common};
        for (int k = 0; k < dim; ++k) {
          ray.v[k] = slack[p] * rays[n].v[k] - slack[n] * rays[p].v[k];
        }
        Normalize(ray.v);
        ray.zeros.Set(id);
        next.push_back(std::move(ray));
      }
    }
    rays = std::move(next);
  }

  std::vector<DirectMechanism> vertices;
  for (const Ray& ray : rays) {
    const double t = ray.v[d];
    if (t <= kZeroTol) continue;
    std::vector<double> y(d);
    for (int k = 0; k < d; ++k) y[k] = ray.v[k] / t;
    vertices.push_back(to_mechanism(y));
  }
  std::vector<DirectMechanism> unique;
  for (auto& v : vertices) {
    const bool seen = std::any_of(unique.begin(), unique.end(),
                                  [&](const auto& u) { return Close(u, v); });
    if (!seen) unique.push_back(std::move(v));
  }
  std::sort(unique.begin(), unique.end(), LexLess);
  return unique;
}

}  // namespace mechpoly
