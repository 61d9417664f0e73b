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

// Completely positive maps on M_n in Kraus form, phi(A) = sum_i v_i* A v_i.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mts/errors.hpp"
#include "mts/linalg.hpp"

namespace mts {

class KrausSet {
 public:
  KrausSet(std::size_t n, std::vector<Matrix> operators)
      : n_(n), ops_(std::move(operators)) {
    check();
  }

  /// Weights are absorbed on construction: v_i -> sqrt(w_i) v_i.
  KrausSet(std::size_t n, std::vector<Matrix> operators,
           std::span<const double> weights)
      : n_(n), ops_(std::move(operators)) {
    if (weights.size() != ops_.size()) {
      throw shape_error("KrausSet: weights and operators differ in length");
    }
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
        throw std::invalid_argument("KrausSet: weights must be positive");
      }
      ops_[i] *= complex(std::sqrt(weights[i]));
    }
    check();
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return ops_.size(); }
  const std::vector<Matrix>& operators() const noexcept { return ops_; }
  const Matrix& operator[](std::size_t i) const { return ops_[i]; }

  auto begin() const noexcept { return ops_.begin(); }
  auto end() const noexcept { return ops_.end(); }

 private:
  void check() const {
    if (n_ == 0) throw shape_error("KrausSet: n must be positive");
    bool any_nonzero = false;
    for (const auto& v : ops_) {
      if (v.rows() != n_ || v.cols() != n_) {
        throw shape_error("KrausSet: operator is not " + std::to_string(n_) +
                          "x" + std::to_string(n_));
      }
      if (!v.all_finite()) {
        throw std::invalid_argument("KrausSet: non-finite entry");
      }
      any_nonzero = any_nonzero || frobenius_norm(v) > 0.0;
    }
    if (!any_nonzero) {
      throw std::invalid_argument("KrausSet: needs a nonzero operator");
    }
  }

  std::size_t n_;
  std::vector<Matrix> ops_;
};

struct UcptReport {
  /// ||sum v_i v_i* - I||_F
  double unital_residual = 0.0;
  /// ||sum v_i* v_i - I||_F
  double trace_residual = 0.0;
  bool is_ucpt = false;
  /// r(phi): size of the linearly independent Kraus set.
  std::size_t kraus_count_reduced = 0;
};

struct DiagonalProfile {
  /// Schur multiplier: phi(A) = c o A when is_diagonal.
  Matrix c;
  double residual = 0.0;
  bool is_diagonal = false;
  /// Every operator of the reduced Kraus set is a diagonal matrix.
  bool operators_diagonal = false;
};

/// phi(a) = sum_i v_i* a v_i
inline Matrix apply(const KrausSet& ks, const Matrix& a) {
  if (a.rows() != ks.n() || a.cols() != ks.n()) {
    throw shape_error("apply: argument is not n x n");
  }
  Matrix out(ks.n(), ks.n());
  for (const auto& v : ks) out += adjoint(v) * a * v;
  return out;
}

/// The Kraus set {v_i*}, i.e. the Hilbert-Schmidt dual map.
inline KrausSet dual(const KrausSet& ks) {
  std::vector<Matrix> ops;
  ops.reserve(ks.size());
  for (const auto& v : ks) ops.push_back(adjoint(v));
  return KrausSet(ks.n(), std::move(ops));
}

/// Density matrix sum_i |(v_i (x) I) xi><(v_i (x) I) xi| with
/// xi = n^{-1/2} sum_j e_j (x) e_j. Since (v (x) I) xi = vec(v) / sqrt(n),
/// this is (1/n) sum_i vec(v_i) vec(v_i)*.
inline Matrix choi(const KrausSet& ks) {
  const std::size_t n = ks.n();
  const std::size_t d = n * n;
  Matrix out(d, d);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (const auto& v : ks) {
    const auto x = v.data();
    for (std::size_t i = 0; i < d; ++i) {
      if (x[i] == complex{}) continue;
      const complex xi = x[i] * inv_n;
      for (std::size_t j = 0; j < d; ++j) out(i, j) += xi * std::conj(x[j]);
    }
  }
  return out;
}

/// (1/n) sum_ij phi(e_ij) (x) e_ij, assembled from the action of the map.
///
/// This equals choi(dual(ks)); choi(ks) is recovered as
/// choi_from_action(dual(ks)). The two coincide for self-dual maps.
inline Matrix choi_from_action(const KrausSet& ks) {
  const std::size_t n = ks.n();
  Matrix out(n * n, n * n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out += kron(apply(ks, Matrix::unit(n, i, j)), Matrix::unit(n, i, j)) *
             inv_n;
  return out;
}

/// rho(a (x) b) = trace(D a (x) b) for a density matrix D on C^n (x) C^n.
inline complex density_pairing(const Matrix& density, const Matrix& a,
                               const Matrix& b) {
  return trace(density * kron(a, b));
}

/// Normalized trace of phi(a) b^t.
inline complex pairing(const KrausSet& ks, const Matrix& a, const Matrix& b) {
  if (b.rows() != ks.n() || b.cols() != ks.n()) {
    throw shape_error("pairing: argument is not n x n");
  }
  return trace(apply(ks, a) * transpose(b)) / static_cast<double>(ks.n());
}

/// Canonical linearly independent Kraus set for the same map.
///
/// Diagonalizes the Gram matrix G_ij = trace(v_i* v_j) and recombines the
/// operators along eigenvectors whose eigenvalue exceeds
/// rank_rel_tol * (largest eigenvalue), in descending eigenvalue order.
inline KrausSet reduce_to_independent(const KrausSet& ks,
                                      const Tolerances& tol = {}) {
  const std::size_t k = ks.size();
  Matrix gram(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      complex g{};
      const auto vi = ks[i].data();
      const auto vj = ks[j].data();
      for (std::size_t e = 0; e < vi.size(); ++e) g += std::conj(vi[e]) * vj[e];
      gram(i, j) = g;
      gram(j, i) = std::conj(g);
    }
  const auto eig = hermitian_eig(gram, tol);
  const double cut = tol.rank_rel_tol * eig.values.front();

  std::vector<Matrix> ops;
  for (std::size_t m = 0; m < k && eig.values[m] > cut; ++m) {
    Matrix w(ks.n(), ks.n());
    for (std::size_t i = 0; i < k; ++i) {
      const complex u = eig.vectors(i, m);
      if (u != complex{}) w += ks[i] * u;
    }
    ops.push_back(std::move(w));
  }
  return KrausSet(ks.n(), std::move(ops));
}

/// (||sum v v* - I||_F, ||sum v* v - I||_F)
inline std::pair<double, double> ucpt_residuals(const KrausSet& ks) {
  const std::size_t n = ks.n();
  Matrix left(n, n);
  Matrix right(n, n);
  for (const auto& v : ks) {
    const Matrix va = adjoint(v);
    left += v * va;
    right += va * v;
  }
  const Matrix id = Matrix::identity(n);
  return {frobenius_distance(left, id), frobenius_distance(right, id)};
}

inline UcptReport validate_ucpt(const KrausSet& ks, const Tolerances& tol = {}) {
  UcptReport r;
  std::tie(r.unital_residual, r.trace_residual) = ucpt_residuals(ks);
  r.is_ucpt = r.unital_residual <= tol.residual_abs_tol &&
              r.trace_residual <= tol.residual_abs_tol;
  r.kraus_count_reduced = reduce_to_independent(ks, tol).size();
  return r;
}

inline bool is_diagonal_matrix(const Matrix& m, double abs_tol) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > abs_tol) return false;
  return true;
}

inline DiagonalProfile diagonal_profile(const KrausSet& ks,
                                        const Tolerances& tol = {}) {
  const std::size_t n = ks.n();
  DiagonalProfile out;
  out.c = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Matrix image = apply(ks, Matrix::unit(n, i, j));
      out.c(i, j) = image(i, j);
      image(i, j) = 0.0;
      out.residual = std::max(out.residual, frobenius_norm(image));
    }
  out.is_diagonal = out.residual <= tol.residual_abs_tol;

  out.operators_diagonal = true;
  for (const auto& v : reduce_to_independent(ks, tol)) {
    if (!is_diagonal_matrix(v, tol.residual_abs_tol)) {
      out.operators_diagonal = false;
      break;
    }
  }
  return out;
}

}  // namespace mts
