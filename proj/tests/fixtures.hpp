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

// Product tables for the n = 3 and n = 4 generators, entered exactly as
// published (matrix units are one-based).

#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

#include "mts/linalg.hpp"

namespace mts::fixtures {

struct Term {
  double coef;
  std::size_t row;
  std::size_t col;
};

/// kind == Outer: w_i w_j*; kind == Inner: w_i* w_j.
enum class Kind { Outer, Inner };

struct Product {
  Kind kind;
  std::size_t i;
  std::size_t j;
  std::vector<Term> value;
};

inline constexpr double r2 = std::numbers::sqrt2;
inline constexpr double r3 = std::numbers::sqrt3;

inline Matrix to_matrix(std::size_t n, const std::vector<Term>& terms) {
  Matrix m(n, n);
  for (const auto& t : terms) m(t.row - 1, t.col - 1) += t.coef;
  return m;
}

inline std::vector<Product> n3_table() {
  using K = Kind;
  return {
      {K::Outer, 1, 1, {{1, 1, 1}}},
      {K::Outer, 2, 1, {}},
      {K::Outer, 3, 1, {{r2, 2, 1}}},
      {K::Outer, 4, 1, {{1, 3, 1}}},
      {K::Outer, 1, 2, {}},
      {K::Outer, 2, 2, {{1, 1, 1}, {2, 2, 2}}},
      {K::Outer, 3, 2, {{r3, 3, 1}}},
      {K::Outer, 4, 2, {{2, 1, 2}}},
      {K::Outer, 1, 3, {{r2, 1, 2}}},
      {K::Outer, 2, 3, {{r3, 1, 3}}},
      {K::Outer, 3, 3, {{2, 2, 2}, {3, 3, 3}}},
      {K::Outer, 4, 3, {{r2, 3, 2}}},
      {K::Outer, 1, 4, {{1, 1, 3}}},
      {K::Outer, 2, 4, {{2, 2, 1}}},
      {K::Outer, 3, 4, {{r2, 2, 3}}},
      {K::Outer, 4, 4, {{1, 3, 3}, {2, 1, 1}}},

      {K::Inner, 1, 1, {{1, 1, 1}}},
      {K::Inner, 2, 1, {{1, 2, 1}}},
      {K::Inner, 3, 1, {{r2, 1, 2}}},  // see n3_printed_erratum()
      {K::Inner, 4, 1, {{r2, 3, 1}}},
      {K::Inner, 1, 2, {{1, 1, 2}}},
      {K::Inner, 2, 2, {{1, 2, 2}, {2, 3, 3}}},
      {K::Inner, 3, 2, {{2, 1, 3}}},
      {K::Inner, 4, 2, {{r2, 3, 2}}},
      {K::Inner, 1, 3, {}},
      {K::Inner, 2, 3, {{2, 3, 1}}},
      {K::Inner, 3, 3, {{2, 1, 1}, {3, 2, 2}}},
      {K::Inner, 4, 3, {{r3, 1, 2}}},
      {K::Inner, 1, 4, {{r2, 1, 3}}},
      {K::Inner, 2, 4, {{r2, 2, 3}}},
      {K::Inner, 3, 4, {{r3, 2, 1}}},
      {K::Inner, 4, 4, {{1, 1, 1}, {2, 3, 3}}},
  };
}

/// The printed entry w_3* w_1 = sqrt2 e_12 cannot hold: w_1 = e_11, so
/// w_3* w_1 = w_3* e_11 is supported on column 1. Its value is 0 (it is the
/// adjoint of w_1* w_3 = 0, which the same table lists). The sqrt2 e_12
/// value belongs to w_1 w_3* in the other table.
struct Erratum {
  Product printed;
  Product corrected;
};

inline Erratum n3_printed_erratum() {
  return {{Kind::Inner, 3, 1, {{r2, 1, 2}}}, {Kind::Inner, 3, 1, {}}};
}

inline std::vector<Product> n4_table() {
  using K = Kind;
  return {
      {K::Outer, 1, 1, {{1, 1, 1}, {1, 3, 3}}},
      {K::Outer, 2, 1, {{r2, 4, 1}}},
      {K::Outer, 3, 1, {}},
      {K::Outer, 1, 2, {{r2, 1, 4}}},
      {K::Outer, 2, 2, {{2, 2, 2}, {2, 4, 4}}},
      {K::Outer, 3, 2, {{2, 1, 2}}},
      {K::Outer, 1, 3, {}},
      {K::Outer, 2, 3, {{2, 2, 1}}},
      {K::Outer, 3, 3, {{2, 1, 1}, {3, 3, 3}}},
      {K::Outer, 1, 4, {{r2, 3, 4}}},
      {K::Outer, 2, 4, {}},
      {K::Outer, 3, 4, {{r3, 3, 2}}},
      {K::Outer, 1, 5, {{1, 3, 1}, {1, 1, 2}}},
      {K::Outer, 2, 5, {{r2, 4, 2}}},
      {K::Outer, 3, 5, {}},
      {K::Outer, 4, 1, {{r2, 4, 3}}},
      {K::Outer, 5, 1, {{1, 1, 3}, {1, 2, 1}}},
      {K::Outer, 4, 2, {}},
      {K::Outer, 5, 2, {{r2, 2, 4}}},
      {K::Outer, 4, 3, {{r3, 2, 3}}},
      {K::Outer, 5, 3, {}},
      {K::Outer, 4, 4, {{1, 2, 2}, {2, 4, 4}}},
      {K::Outer, 5, 4, {{r2, 1, 4}}},
      {K::Outer, 4, 5, {{r2, 4, 1}}},
      {K::Outer, 5, 5, {{1, 1, 1}, {1, 2, 2}}},

      {K::Inner, 1, 1, {{1, 3, 3}, {1, 2, 2}}},
      {K::Inner, 2, 1, {}},
      {K::Inner, 3, 1, {{r2, 4, 3}, {r3, 1, 2}}},
      {K::Inner, 1, 2, {}},
      {K::Inner, 2, 2, {{2, 4, 4}, {2, 3, 3}}},
      {K::Inner, 3, 2, {}},
      {K::Inner, 1, 3, {{r2, 3, 4}, {r3, 2, 1}}},
      {K::Inner, 2, 3, {}},
      {K::Inner, 3, 3, {{2, 4, 4}, {3, 1, 1}}},
      {K::Inner, 1, 4, {}},
      {K::Inner, 2, 4, {{r2, 4, 1}, {2, 3, 2}}},
      {K::Inner, 3, 4, {}},
      {K::Inner, 1, 5, {{1, 3, 2}}},
      {K::Inner, 2, 5, {{r2, 4, 3}}},
      {K::Inner, 3, 5, {{r2, 4, 2}}},
      {K::Inner, 4, 1, {}},
      {K::Inner, 5, 1, {{1, 2, 3}}},
      {K::Inner, 4, 2, {{r2, 1, 4}, {2, 2, 3}}},
      {K::Inner, 5, 2, {{r2, 3, 4}}},
      {K::Inner, 4, 3, {}},
      {K::Inner, 5, 3, {{r2, 2, 4}}},
      {K::Inner, 4, 4, {{1, 1, 1}, {2, 2, 2}}},
      {K::Inner, 5, 4, {{1, 3, 1}}},
      {K::Inner, 4, 5, {{1, 1, 3}}},
      {K::Inner, 5, 5, {{1, 2, 2}, {1, 3, 3}}},
  };
}

/// Computes the product a fixture row describes from the generators.
inline Matrix evaluate(const std::vector<Matrix>& w, const Product& p) {
  const Matrix& wi = w[p.i - 1];
  const Matrix& wj = w[p.j - 1];
  return p.kind == Kind::Outer ? wi * adjoint(wj) : adjoint(wi) * wj;
}

}  // namespace mts::fixtures
