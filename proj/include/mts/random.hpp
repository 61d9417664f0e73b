// Copyright 2026 The mts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded randomness. Every random quantity in the toolkit is drawn from
// std::mt19937_64 (whose output sequence is fixed by the standard):
//   uniform  = (draw >> 11) * 2^-53, in [0, 1)
//   normal   = Box-Muller on two uniforms, both outputs used in turn
//   complex  = normal + i * normal
// std::normal_distribution is avoided because its algorithm is
// implementation-defined.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "mts/linalg.hpp"

namespace mts {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  complex complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

  /// Uniform integer in [lo, hi].
  long long integer(long long lo, long long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Independent seed for item `index` of a batch (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (auto& z : m.data()) z = rng.complex_normal();
  return m;
}

/// Orthonormalized complex Gaussian matrix.
inline Matrix random_unitary(std::size_t n, Rng& rng) {
  Matrix q;
  do {
    q = orthonormalize(gaussian_matrix(n, n, rng));
  } while (q.cols() != n);
  return q;
}

}  // namespace mts
