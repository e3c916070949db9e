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

#ifndef MECHPOLY_RANDOM_H_
#define MECHPOLY_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace mechpoly {

// Seeded generator with platform-independent conversions. The standard
// distributions are implementation-defined, so doubles and integers are
// derived directly from the 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform on [0, 1).
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform on {0, ..., n - 1}; n > 0.
  int Below(int n) {
    return static_cast<int>(Uniform() * static_cast<double>(n));
  }

  // Point of the probability simplex with `n` entries (normalized
  // exponentials).
  std::vector<double> Simplex(int n) {
    std::vector<double> p(n);
    double total = 0.0;
    for (double& v : p) {
      v = -std::log(1.0 - Uniform());
      total += v;
    }
    for (double& v : p) v /= total;
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent child seed (splitmix64 finalizer).
inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace mechpoly

#endif  // MECHPOLY_RANDOM_H_
