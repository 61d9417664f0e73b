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

// Explicit UCPT families and random generators.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mts/channel.hpp"
#include "mts/errors.hpp"
#include "mts/extremality.hpp"
#include "mts/linalg.hpp"
#include "mts/random.hpp"

namespace mts {

namespace detail {

// sum of coef * e_{row,col}, one-based indices as in the matrix-unit tables.
struct UnitTerm {
  double coef;
  std::size_t row;
  std::size_t col;
};

inline Matrix from_units(std::size_t n, std::initializer_list<UnitTerm> terms) {
  Matrix m(n, n);
  for (const auto& t : terms) m(t.row - 1, t.col - 1) += t.coef;
  return m;
}

inline KrausSet halve(std::size_t n, std::vector<Matrix> ws) {
  for (auto& w : ws) w *= complex(0.5);
  return KrausSet(n, std::move(ws));
}

}  // namespace detail

/// w_1..w_4 on M_3 with sum w w* = sum w* w = 4 I.
inline std::vector<Matrix> n3_generators() {
  using detail::from_units;
  const double r2 = std::numbers::sqrt2;
  const double r3 = std::numbers::sqrt3;
  return {
      from_units(3, {{1, 1, 1}}),
      from_units(3, {{1, 1, 2}, {r2, 2, 3}}),
      from_units(3, {{r2, 2, 1}, {r3, 3, 2}}),
      from_units(3, {{1, 3, 1}, {r2, 1, 3}}),
  };
}

/// w_1..w_5 on M_4 with sum w w* = sum w* w = 4 I.
inline std::vector<Matrix> n4_generators() {
  using detail::from_units;
  const double r2 = std::numbers::sqrt2;
  const double r3 = std::numbers::sqrt3;
  return {
      from_units(4, {{1, 1, 3}, {1, 3, 2}}),
      from_units(4, {{r2, 2, 4}, {r2, 4, 3}}),
      from_units(4, {{r2, 1, 4}, {r3, 3, 1}}),
      from_units(4, {{1, 2, 1}, {r2, 4, 2}}),
      from_units(4, {{1, 1, 2}, {1, 2, 3}}),
  };
}

/// Extremal UCPT map on M_3 with four Kraus operators (w_i / 2).
inline KrausSet construct_n3() { return detail::halve(3, n3_generators()); }

/// Extremal UCPT map on M_4 with five Kraus operators (w_i / 2).
inline KrausSet construct_n4() { return detail::halve(4, n4_generators()); }

/// Whether construct_general(n) is within the range where extremality is
/// established analytically (n >= 5). Smaller n are certified numerically.
inline bool general_family_proven(std::size_t n) { return n >= 5; }

/// v_1 = sqrt((n-2)/(n-1)) sum_{j>=2} e_jj,
/// v_i = (e_1i + e_i1) / sqrt(n-1) for i = 2..n.
inline KrausSet construct_general(std::size_t n) {
  if (n < 3) throw std::invalid_argument("construct_general: n must be >= 3");
  const double nm1 = static_cast<double>(n - 1);
  std::vector<Matrix> ops;
  ops.reserve(n);
  Matrix v1(n, n);
  const double d = std::sqrt((nm1 - 1.0) / nm1);
  for (std::size_t j = 1; j < n; ++j) v1(j, j) = d;
  ops.push_back(std::move(v1));
  const double s = 1.0 / std::sqrt(nm1);
  for (std::size_t i = 1; i < n; ++i) {
    Matrix v(n, n);
    v(0, i) = s;
    v(i, 0) = s;
    ops.push_back(std::move(v));
  }
  return KrausSet(n, std::move(ops));
}

struct ThetaSchedule {
  std::size_t a = 0;
  std::vector<double> thetas;
};

/// Smallest circular distance between two distinct ordered differences
/// theta_i - theta_j (i != j), measured mod 2 pi.
inline double min_difference_separation(const ThetaSchedule& s) {
  std::vector<double> diffs;
  for (std::size_t i = 0; i < s.a; ++i)
    for (std::size_t j = 0; j < s.a; ++j)
      if (i != j) diffs.push_back(s.thetas[i] - s.thetas[j]);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double best = two_pi;
  for (std::size_t x = 0; x < diffs.size(); ++x)
    for (std::size_t y = x + 1; y < diffs.size(); ++y) {
      const double r = std::fmod(std::abs(diffs[x] - diffs[y]), two_pi);
      best = std::min(best, std::min(r, two_pi - r));
    }
  return best;
}

/// theta_i = 2 pi 2^(i-1) / 2^(a+1), i = 1..a. Differences of distinct
/// powers of two are distinct and all lie in (-pi, pi).
inline ThetaSchedule theta_schedule(std::size_t a) {
  if (a < 2) throw std::invalid_argument("theta_schedule: a must be >= 2");
  if (a > 20) {
    throw std::invalid_argument("theta_schedule: a > 20 cannot keep the "
                                "differences 1e-6 apart");
  }
  ThetaSchedule s;
  s.a = a;
  const double denom = std::ldexp(1.0, static_cast<int>(a + 1));
  for (std::size_t i = 0; i < a; ++i)
    s.thetas.push_back(2.0 * std::numbers::pi * std::ldexp(1.0, static_cast<int>(i)) /
                       denom);
  if (min_difference_separation(s) <= 1e-6) {
    throw std::logic_error("theta_schedule: differences not separated");
  }
  return s;
}

struct DiagonalVandermondeSpec {
  std::size_t a = 0;
  std::size_t n = 0;
  std::size_t m = 0;  // a^2
  std::size_t l = 0;  // a^2 - a
  /// a x l, b(i, k) = a^{-1/2} exp(i (k+1) theta_i)
  Matrix b;
  /// a x (n - m) padding, constant a^{-1/2}
  Matrix c;
  ThetaSchedule schedule;
};

inline DiagonalVandermondeSpec diagonal_vandermonde_spec(std::size_t a,
                                                         std::size_t n) {
  if (a < 2) throw std::invalid_argument("diagonal_vandermonde_spec: a >= 2");
  if (a * a > n) {
    throw std::invalid_argument("diagonal_vandermonde: need a^2 <= n, got a = " +
                                std::to_string(a) + ", n = " + std::to_string(n));
  }
  DiagonalVandermondeSpec s;
  s.a = a;
  s.n = n;
  s.m = a * a;
  s.l = s.m - a;
  s.schedule = theta_schedule(a);
  const double amp = 1.0 / std::sqrt(static_cast<double>(a));
  s.b = Matrix(a, s.l);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t k = 0; k < s.l; ++k)
      s.b(i, k) = std::polar(amp, static_cast<double>(k + 1) * s.schedule.thetas[i]);
  s.c = Matrix(a, n - s.m);
  for (auto& z : s.c.data()) z = amp;
  return s;
}

/// Rows (p, q), p != q in lexicographic order, columns k = 1..l:
/// exp(i k (theta_p - theta_q)).
inline Matrix vandermonde_corner(const DiagonalVandermondeSpec& s) {
  Matrix out(s.l, s.l);
  std::size_t row = 0;
  for (std::size_t p = 0; p < s.a; ++p)
    for (std::size_t q = 0; q < s.a; ++q) {
      if (p == q) continue;
      const double delta = s.schedule.thetas[p] - s.schedule.thetas[q];
      for (std::size_t k = 0; k < s.l; ++k)
        out(row, k) = std::polar(1.0, static_cast<double>(k + 1) * delta);
      ++row;
    }
  return out;
}

/// Diagonals of v_1..v_a as rows of an a x n array.
inline Matrix vandermonde_entries(const DiagonalVandermondeSpec& s) {
  Matrix out(s.a, s.n);
  for (std::size_t i = 0; i < s.a; ++i) {
    out(i, i) = 1.0;
    for (std::size_t k = 0; k < s.l; ++k) out(i, s.a + k) = s.b(i, k);
    for (std::size_t k = 0; k < s.n - s.m; ++k) out(i, s.m + k) = s.c(i, k);
  }
  return out;
}

/// The a^2 x m matrix whose rows are the first m diagonal entries of
/// v_p v_q*, diagonal pairs (p, p) first, then p != q lexicographically.
inline Matrix vandermonde_pair_matrix(const DiagonalVandermondeSpec& s) {
  const Matrix e = vandermonde_entries(s);
  Matrix out(s.m, s.m);
  std::size_t row = 0;
  auto emit = [&](std::size_t p, std::size_t q) {
    for (std::size_t x = 0; x < s.m; ++x) out(row, x) = e(p, x) * std::conj(e(q, x));
    ++row;
  };
  for (std::size_t p = 0; p < s.a; ++p) emit(p, p);
  for (std::size_t p = 0; p < s.a; ++p)
    for (std::size_t q = 0; q < s.a; ++q)
      if (p != q) emit(p, q);
  return out;
}

inline KrausSet diagonal_kraus_from_entries(const Matrix& entries) {
  std::vector<Matrix> ops;
  ops.reserve(entries.rows());
  for (std::size_t i = 0; i < entries.rows(); ++i)
    ops.push_back(Matrix::diagonal(entries.row(i)));
  return KrausSet(entries.cols(), std::move(ops));
}

/// a diagonal Kraus operators on M_n (a^2 <= n) forming an extremal UCPT map
/// of rank a. a = 1 gives the identity.
inline KrausSet diagonal_vandermonde(std::size_t a, std::size_t n) {
  if (a == 0 || n == 0) {
    throw std::invalid_argument("diagonal_vandermonde: a and n must be >= 1");
  }
  if (a * a > n) {
    throw std::invalid_argument("diagonal_vandermonde: need a^2 <= n, got a = " +
                                std::to_string(a) + ", n = " + std::to_string(n));
  }
  if (a == 1) return KrausSet(n, {Matrix::identity(n)});
  return diagonal_kraus_from_entries(
      vandermonde_entries(diagonal_vandermonde_spec(a, n)));
}

struct PerturbationSpec {
  /// Diagonal UCPT base map; zero operators allowed.
  KrausSet u;
  /// Diagonal UCPT map with linearly independent {v_i v_j*}.
  KrausSet v;
  double epsilon = 0.0;
};

/// w_i = u_i + eps v_i, renormalized as w_i S^{-1/2} with S = sum w_i* w_i.
inline KrausSet perturb_diagonal(const PerturbationSpec& spec,
                                 const Tolerances& tol = {}) {
  const auto& u = spec.u;
  const auto& v = spec.v;
  if (u.n() != v.n() || u.size() != v.size()) {
    throw contract_error("perturb_diagonal: u and v must have matching shapes");
  }
  if (!(spec.epsilon >= 0.0) || !std::isfinite(spec.epsilon)) {
    throw std::invalid_argument("perturb_diagonal: epsilon must be >= 0");
  }
  for (const auto* ks : {&u, &v})
    for (const auto& op : *ks)
      if (!is_diagonal_matrix(op, 0.0)) {
        throw contract_error("perturb_diagonal: operators must be diagonal");
      }
  if (!validate_ucpt(u, tol).is_ucpt) {
    throw contract_error("perturb_diagonal: u is not UCPT");
  }
  const KrausSet v_reduced = reduce_to_independent(v, tol);
  if (v_reduced.size() != v.size() ||
      !ls_bi_independence(v_reduced, tol).is_extremal) {
    throw contract_error("perturb_diagonal: v is not an extremal UCPT map");
  }

  const std::size_t n = u.n();
  std::vector<Matrix> ws;
  ws.reserve(u.size());
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    Matrix w = u[i] + v[i] * spec.epsilon;
    for (std::size_t x = 0; x < n; ++x) s[x] += std::norm(w(x, x));
    ws.push_back(std::move(w));
  }
  const double smallest = *std::min_element(s.begin(), s.end());
  if (smallest <= tol.residual_abs_tol) {
    throw degenerate_epsilon_error(
        "perturb_diagonal: sum w_i* w_i is singular at this epsilon");
  }
  for (auto& w : ws)
    for (std::size_t x = 0; x < n; ++x) w(x, x) /= std::sqrt(s[x]);
  return KrausSet(n, std::move(ws));
}

inline bool is_unitary(const Matrix& u, double abs_tol = 1e-10) {
  if (!u.is_square()) return false;
  return frobenius_distance(adjoint(u) * u, Matrix::identity(u.rows())) <= abs_tol;
}

inline KrausSet unitary_channel(const Matrix& u) {
  if (!is_unitary(u)) {
    throw std::invalid_argument("unitary_channel: matrix is not unitary");
  }
  return KrausSet(u.rows(), {u});
}

/// Kraus operators sqrt(p_i) u_i.
inline KrausSet mixture_of_unitaries(std::span<const double> weights,
                                     std::span<const Matrix> us) {
  if (weights.empty() || weights.size() != us.size()) {
    throw std::invalid_argument(
        "mixture_of_unitaries: need equally many weights and unitaries");
  }
  double total = 0.0;
  for (double p : weights) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("mixture_of_unitaries: weights must be > 0");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture_of_unitaries: weights must sum to 1");
  }
  for (const auto& u : us)
    if (!is_unitary(u)) {
      throw std::invalid_argument("mixture_of_unitaries: non-unitary operand");
    }
  return KrausSet(us.front().rows(), std::vector<Matrix>(us.begin(), us.end()),
                  weights);
}

/// a diagonal operators on M_n; each of the n columns of the a x n entry
/// array is a complex Gaussian vector normalized to unit length, which makes
/// the set UCPT.
inline KrausSet random_diagonal_ucpt(std::size_t a, std::size_t n,
                                     std::uint64_t seed) {
  if (a == 0 || n == 0) {
    throw std::invalid_argument("random_diagonal_ucpt: a and n must be >= 1");
  }
  Rng rng(seed);
  Matrix entries(a, n);
  for (std::size_t x = 0; x < n; ++x) {
    double norm2 = 0.0;
    while (norm2 == 0.0) {
      norm2 = 0.0;
      for (std::size_t i = 0; i < a; ++i) {
        entries(i, x) = rng.complex_normal();
        norm2 += std::norm(entries(i, x));
      }
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < a; ++i) entries(i, x) *= inv;
  }
  return diagonal_kraus_from_entries(entries);
}

/// Alternately rescales v_i <- v_i S^{-1/2} (S = sum v* v) and
/// v_i <- T^{-1/2} v_i (T = sum v v*) until both residuals are below
/// 1e-13. Throws numerical_error when the iteration stalls.
inline KrausSet sinkhorn_normalize(std::vector<Matrix> ops, std::size_t n,
                                   const Tolerances& tol = {},
                                   int max_iterations = 2000) {
  // The residual target sits below the default eigen stopping rule, so the
  // inverse square roots are computed with a tighter one.
  Tolerances fine = tol;
  fine.eig_off_diag_tol = std::min(tol.eig_off_diag_tol, 1e-15);
  auto inv_sqrt = [&](const Matrix& h) {
    return hermitian_function(h, [](double x) {
      if (!(x > 0.0)) throw numerical_error("sinkhorn_normalize: singular", 0);
      return 1.0 / std::sqrt(x);
    }, fine);
  };
  for (int it = 0; it < max_iterations; ++it) {
    Matrix s(n, n);
    for (const auto& v : ops) s += adjoint(v) * v;
    const Matrix sr = inv_sqrt(s);
    for (auto& v : ops) v = v * sr;
    Matrix t(n, n);
    for (const auto& v : ops) t += v * adjoint(v);
    const Matrix tr = inv_sqrt(t);
    for (auto& v : ops) v = tr * v;

    KrausSet ks(n, ops);
    const auto [unital, trace_pres] = ucpt_residuals(ks);
    if (unital < 1e-13 && trace_pres < 1e-13) return ks;
  }
  throw numerical_error("sinkhorn_normalize: did not converge", max_iterations);
}

/// Generic UCPT map with k Kraus operators: complex Gaussian operators
/// brought to the doubly stochastic form by sinkhorn_normalize.
inline KrausSet random_ucpt(std::size_t n, std::size_t k, std::uint64_t seed,
                            const Tolerances& tol = {}) {
  if (n == 0 || k == 0) throw std::invalid_argument("random_ucpt: n, k >= 1");
  Rng rng(seed);
  std::vector<Matrix> ops;
  ops.reserve(k);
  for (std::size_t i = 0; i < k; ++i) ops.push_back(gaussian_matrix(n, n, rng));
  return sinkhorn_normalize(std::move(ops), n, tol);
}

/// Equal-weight mixture of k independent random unitaries.
inline KrausSet random_unitary_mixture(std::size_t n, std::size_t k,
                                       std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix> us;
  for (std::size_t i = 0; i < k; ++i) us.push_back(random_unitary(n, rng));
  std::vector<double> w(k, 1.0 / static_cast<double>(k));
  w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
  return mixture_of_unitaries(w, us);
}

}  // namespace mts
