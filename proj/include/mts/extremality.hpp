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

// Two independent extremality tests for UCPT maps / marginal tracial states.
//
//  * Landau-Streater (LS): with {v_i} linearly independent, phi is extremal
//    iff sum a_ij v_i v_j* = 0 and sum a_ij v_j* v_i = 0 force a = 0. The
//    k^2 columns [vec(v_i v_j*); vec(v_j* v_i)] must have rank k^2.
//  * Price-Sakai (PS): rho is extremal iff the corner P (M_n (x) M_n) P meets
//    (M_n - C I) (x) (M_n - C I) only in 0. Both subspaces come with
//    orthonormal bases; their stacked rank must be r^2 + (n^2 - 1)^2.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mts/channel.hpp"
#include "mts/errors.hpp"
#include "mts/linalg.hpp"
#include "mts/state.hpp"

namespace mts {

enum class Method { LS, PS };

inline const char* to_string(Method m) { return m == Method::LS ? "LS" : "PS"; }

struct ExtremalityCertificate {
  Method method = Method::LS;
  std::size_t n = 0;
  /// Kraus count (LS) or state rank (PS).
  std::size_t k_or_r = 0;
  std::size_t stacked_rows = 0;
  std::size_t stacked_cols = 0;
  std::size_t achieved_rank = 0;
  std::size_t required_rank = 0;
  bool is_extremal = false;
  double tolerance_used = 0.0;
};

struct CrossValidation {
  ExtremalityCertificate ls;
  ExtremalityCertificate ps;
  bool agree = false;
};

/// Largest PS dimension run without an explicit override.
inline constexpr std::size_t kPsDefaultMaxN = 5;

/// floor(sqrt(2 n^2 - 1)) in integer arithmetic.
inline std::size_t rank_bound(long long n) {
  if (n < 1) throw std::invalid_argument("rank_bound: n must be >= 1");
  const unsigned long long target = 2ULL * n * n - 1ULL;
  auto m = static_cast<unsigned long long>(std::sqrt(static_cast<double>(target)));
  while (m * m > target) --m;
  while ((m + 1) * (m + 1) <= target) ++m;
  return static_cast<std::size_t>(m);
}

/// Generalized Gell-Mann matrices with Hilbert-Schmidt norm 1, in the order:
/// symmetric (e_jk + e_kj), antisymmetric (-i e_jk + i e_kj) for j < k in
/// lexicographic order, then diagonal diag(1, ..., 1, -l, 0, ...) for
/// l = 1 .. n-1. They span M_n - C I.
inline std::vector<Matrix> gell_mann_basis(std::size_t n) {
  std::vector<Matrix> out;
  out.reserve(n * n - 1);
  const double h = 1.0 / std::sqrt(2.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      Matrix m(n, n);
      m(j, k) = h;
      m(k, j) = h;
      out.push_back(std::move(m));
    }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      Matrix m(n, n);
      m(j, k) = complex(0.0, -h);
      m(k, j) = complex(0.0, h);
      out.push_back(std::move(m));
    }
  for (std::size_t l = 1; l < n; ++l) {
    Matrix m(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (std::size_t j = 0; j < l; ++j) m(j, j) = scale;
    m(l, l) = -static_cast<double>(l) * scale;
    out.push_back(std::move(m));
  }
  return out;
}

/// Landau-Streater bi-independence test.
///
/// Requires a UCPT Kraus set that is already linearly independent
/// (reduce_to_independent); throws contract_error otherwise.
inline ExtremalityCertificate ls_bi_independence(const KrausSet& ks,
                                                 const Tolerances& tol = {}) {
  const auto report = validate_ucpt(ks, tol);
  if (!report.is_ucpt) {
    throw contract_error("ls_bi_independence: Kraus set is not UCPT");
  }
  if (report.kraus_count_reduced != ks.size()) {
    throw contract_error(
        "ls_bi_independence: Kraus operators are linearly dependent; reduce "
        "first");
  }
  const std::size_t n = ks.n();
  const std::size_t k = ks.size();
  const std::size_t half = n * n;

  std::vector<Matrix> adj;
  adj.reserve(k);
  for (const auto& v : ks) adj.push_back(adjoint(v));

  Matrix stacked(2 * half, k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t col = i * k + j;
      const Matrix left = ks[i] * adj[j];
      const Matrix right = adj[j] * ks[i];
      for (std::size_t e = 0; e < half; ++e) {
        stacked(e, col) = left.data()[e];
        stacked(half + e, col) = right.data()[e];
      }
    }

  ExtremalityCertificate c;
  c.method = Method::LS;
  c.n = n;
  c.k_or_r = k;
  c.stacked_rows = stacked.rows();
  c.stacked_cols = stacked.cols();
  c.achieved_rank = rank(stacked, tol);
  c.required_rank = k * k;
  c.is_extremal = c.achieved_rank == c.required_rank;
  c.tolerance_used = tol.rank_rel_tol;
  return c;
}

/// Price-Sakai support-projection test on a marginal tracial state.
///
/// Gated to n <= kPsDefaultMaxN unless allow_large is set.
inline ExtremalityCertificate ps_support_test(const MarginalState& s,
                                              const Tolerances& tol = {},
                                              bool allow_large = false) {
  if (!validate_marginal(s, tol).is_marginal_tracial) {
    throw contract_error("ps_support_test: state is not marginal tracial");
  }
  const std::size_t n = s.n();
  if (n > kPsDefaultMaxN && !allow_large) {
    throw contract_error("ps_support_test: n = " + std::to_string(n) +
                         " exceeds the default limit of " +
                         std::to_string(kPsDefaultMaxN) +
                         "; pass allow_large to override");
  }
  const std::size_t d = n * n;
  const std::size_t r = s.retained(tol);
  const std::size_t t = d - 1;
  const Matrix& z = s.eigenvectors();

  Matrix stacked(d * d, r * r + t * t);
  std::size_t col = 0;
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b, ++col)
      for (std::size_t i = 0; i < d; ++i) {
        const complex zi = z(i, a);
        for (std::size_t j = 0; j < d; ++j)
          stacked(i * d + j, col) = zi * std::conj(z(j, b));
      }
  const auto basis = gell_mann_basis(n);
  for (const auto& fa : basis)
    for (const auto& fb : basis) {
      const Matrix prod = kron(fa, fb);
      const auto pd = prod.data();
      for (std::size_t e = 0; e < pd.size(); ++e) stacked(e, col) = pd[e];
      ++col;
    }

  ExtremalityCertificate c;
  c.method = Method::PS;
  c.n = n;
  c.k_or_r = r;
  c.stacked_rows = stacked.rows();
  c.stacked_cols = stacked.cols();
  c.achieved_rank = rank(stacked, tol);
  c.required_rank = r * r + t * t;
  c.is_extremal = c.achieved_rank == c.required_rank;
  c.tolerance_used = tol.rank_rel_tol;
  return c;
}

/// Runs LS on the reduced Kraus set and PS on its Choi state.
inline CrossValidation cross_validate(const KrausSet& ks,
                                      const Tolerances& tol = {},
                                      bool allow_large = false) {
  CrossValidation out;
  out.ls = ls_bi_independence(reduce_to_independent(ks, tol), tol);
  out.ps = ps_support_test(MarginalState::from_channel(ks, tol), tol,
                           allow_large);
  out.agree = out.ls.is_extremal == out.ps.is_extremal;
  return out;
}

}  // namespace mts
