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

// States on M_n (x) M_n given by their density matrices, and the inverse of
// the Kraus-set -> Choi-matrix map.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mts/channel.hpp"
#include "mts/errors.hpp"
#include "mts/linalg.hpp"

namespace mts {

/// A density matrix on C^n (x) C^n with its spectrum computed once.
class MarginalState {
 public:
  MarginalState(std::size_t n, Matrix density, const Tolerances& tol = {})
      : n_(n), density_(std::move(density)) {
    if (n_ == 0 || !density_.is_square() || density_.rows() != n_ * n_) {
      throw shape_error("MarginalState: density must be n^2 x n^2 with n = " +
                        std::to_string(n_));
    }
    spectral_ = hermitian_eig(density_, tol);
  }

  static MarginalState from_channel(const KrausSet& ks,
                                    const Tolerances& tol = {}) {
    return MarginalState(ks.n(), choi(ks), tol);
  }

  std::size_t n() const noexcept { return n_; }
  const Matrix& density() const noexcept { return density_; }
  /// Eigenvalues, descending.
  const std::vector<double>& eigenvalues() const noexcept {
    return spectral_.values;
  }
  /// Eigenvectors as columns, aligned with eigenvalues().
  const Matrix& eigenvectors() const noexcept { return spectral_.vectors; }

  /// Count of eigenvalues above rank_rel_tol * lambda_max.
  std::size_t retained(const Tolerances& tol) const {
    const auto& lam = spectral_.values;
    if (lam.empty() || lam.front() <= 0.0) return 0;
    const double cut = tol.rank_rel_tol * lam.front();
    return static_cast<std::size_t>(
        std::count_if(lam.begin(), lam.end(), [&](double l) { return l > cut; }));
  }

 private:
  std::size_t n_;
  Matrix density_;
  EigenDecomposition spectral_;
};

struct MarginalReport {
  /// ||trace_1(D) - I/n||_F
  double pt_first_residual = 0.0;
  /// ||trace_2(D) - I/n||_F
  double pt_second_residual = 0.0;
  /// max(0, -lambda_min)
  double psd_defect = 0.0;
  /// |trace(D) - 1|
  double trace_defect = 0.0;
  bool is_marginal_tracial = false;
};

struct SupportProjection {
  Matrix p;
  std::size_t r = 0;
};

inline MarginalReport validate_marginal(const MarginalState& s,
                                        const Tolerances& tol = {}) {
  const std::size_t n = s.n();
  const Matrix target = Matrix::identity(n) * (1.0 / static_cast<double>(n));
  MarginalReport r;
  r.pt_first_residual =
      frobenius_distance(partial_trace(s.density(), n, Side::first), target);
  r.pt_second_residual =
      frobenius_distance(partial_trace(s.density(), n, Side::second), target);
  r.psd_defect = std::max(0.0, -s.eigenvalues().back());
  r.trace_defect = std::abs(trace(s.density()) - 1.0);
  r.is_marginal_tracial = r.pt_first_residual <= tol.residual_abs_tol &&
                          r.pt_second_residual <= tol.residual_abs_tol &&
                          r.psd_defect <= tol.residual_abs_tol &&
                          r.trace_defect <= tol.residual_abs_tol;
  return r;
}

inline std::size_t state_rank(const MarginalState& s, const Tolerances& tol = {}) {
  return s.retained(tol);
}

/// Projection onto the span of the retained eigenvectors.
inline SupportProjection support_projection(const MarginalState& s,
                                            const Tolerances& tol = {}) {
  const std::size_t d = s.density().rows();
  SupportProjection out;
  out.r = s.retained(tol);
  out.p = Matrix(d, d);
  const Matrix& z = s.eigenvectors();
  for (std::size_t k = 0; k < out.r; ++k)
    for (std::size_t i = 0; i < d; ++i) {
      const complex zi = z(i, k);
      if (zi == complex{}) continue;
      for (std::size_t j = 0; j < d; ++j) out.p(i, j) += zi * std::conj(z(j, k));
    }
  return out;
}

/// Kraus set whose Choi matrix is the given marginal tracial density.
///
/// Each retained eigenpair (lambda, zeta) contributes sqrt(lambda) v with
/// column j of v equal to sqrt(n) times the j-th second-factor slice of
/// zeta; under the first-factor-major convention that is
/// v = sqrt(n) * unvectorize(zeta).
inline KrausSet kraus_from_state(const MarginalState& s,
                                 const Tolerances& tol = {}) {
  if (!validate_marginal(s, tol).is_marginal_tracial) {
    throw contract_error("kraus_from_state: state is not marginal tracial");
  }
  const std::size_t n = s.n();
  const std::size_t d = n * n;
  const std::size_t r = s.retained(tol);
  const double root_n = std::sqrt(static_cast<double>(n));
  std::vector<Matrix> ops;
  ops.reserve(r);
  std::vector<complex> zeta(d);
  for (std::size_t k = 0; k < r; ++k) {
    const double w = std::sqrt(s.eigenvalues()[k]) * root_n;
    for (std::size_t i = 0; i < d; ++i) zeta[i] = s.eigenvectors()(i, k) * w;
    ops.push_back(unvectorize(zeta, n));
  }
  return KrausSet(n, std::move(ops));
}

}  // namespace mts
