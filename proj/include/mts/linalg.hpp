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

// Dense complex linear algebra used by the rest of the toolkit.
//
// Tensor convention: the composite index of (p, r) in C^a (x) C^b is
// p * b + r (first factor major). kron, partial_trace, vectorize and every
// Choi-matrix routine built on top of them follow it.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mts/errors.hpp"

namespace mts {

using complex = std::complex<double>;

struct Tolerances {
  double rank_rel_tol = 1e-9;
  double residual_abs_tol = 1e-10;
  /// Off-diagonal Frobenius mass relative to the input's Frobenius norm.
  double eig_off_diag_tol = 1e-12;
  int eig_max_sweeps = 100;

  void validate() const {
    if (!(rank_rel_tol > 0) || !(residual_abs_tol > 0) ||
        !(eig_off_diag_tol > 0) || eig_max_sweeps < 1) {
      throw std::invalid_argument("tolerances must be strictly positive");
    }
  }
};

inline bool is_finite(complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Dense row-major complex matrix.
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  Matrix(std::size_t rows, std::size_t cols, std::vector<complex> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw shape_error("matrix data length " + std::to_string(data_.size()) +
                        " != " + std::to_string(rows_) + "x" +
                        std::to_string(cols_));
    }
    if (!std::all_of(data_.begin(), data_.end(), is_finite)) {
      throw std::invalid_argument("matrix entries must be finite");
    }
  }

  Matrix(std::initializer_list<std::initializer_list<complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw shape_error("ragged initializer list");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix zeros(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols);
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Matrix unit e_ij (zero-based).
  static Matrix unit(std::size_t n, std::size_t i, std::size_t j) {
    Matrix m(n, n);
    m(i, j) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const complex> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static Matrix column(std::span<const complex> v) {
    return Matrix(v.size(), 1, std::vector<complex>(v.begin(), v.end()));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  complex& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<complex> data() noexcept { return data_; }
  std::span<const complex> data() const noexcept { return data_; }

  std::span<const complex> row(std::size_t i) const {
    return std::span<const complex>(data_).subspan(i * cols_, cols_);
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), is_finite);
  }

  Matrix& operator+=(const Matrix& other) {
    require_same_shape(other, "+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }

  Matrix& operator-=(const Matrix& other) {
    require_same_shape(other, "-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
  }

  Matrix& operator*=(complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, complex s) { return a *= s; }
  friend Matrix operator*(complex s, Matrix a) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= complex(s); }
  friend Matrix operator*(Matrix a, double s) { return a *= complex(s); }

 private:
  void require_same_shape(const Matrix& other, const char* op) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
      throw shape_error(std::string("shape mismatch in ") + op);
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<complex> data_;
};

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw shape_error("matmul: " + std::to_string(a.rows()) + "x" +
                      std::to_string(a.cols()) + " times " +
                      std::to_string(b.rows()) + "x" +
                      std::to_string(b.cols()));
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const complex aik = a(i, k);
      if (aik == complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

inline Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }

inline Matrix adjoint(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline Matrix conjugate(Matrix a) {
  for (auto& z : a.data()) z = std::conj(z);
  return a;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t q = 0; q < a.cols(); ++q) {
      const complex apq = a(p, q);
      if (apq == complex{}) continue;
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t s = 0; s < b.cols(); ++s)
          k(p * b.rows() + r, q * b.cols() + s) = apq * b(r, s);
    }
  return k;
}

/// Entrywise product.
inline Matrix schur_product(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw shape_error("schur_product: shape mismatch");
  }
  Matrix c(a.rows(), a.cols());
  auto ad = a.data();
  auto bd = b.data();
  auto cd = c.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] = ad[i] * bd[i];
  return c;
}

inline complex trace(const Matrix& a) {
  if (!a.is_square()) throw shape_error("trace of non-square matrix");
  complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

inline double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (const auto& z : a.data()) s += std::norm(z);
  return std::sqrt(s);
}

inline double frobenius_distance(const Matrix& a, const Matrix& b) {
  return frobenius_norm(a - b);
}

inline double max_abs(const Matrix& a) {
  double m = 0.0;
  for (const auto& z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

/// Which tensor factor partial_trace removes.
enum class Side { first, second };

/// Traces an n^2 x n^2 operator over one factor of C^n (x) C^n.
inline Matrix partial_trace(const Matrix& m, std::size_t n, Side side) {
  if (!m.is_square() || n == 0 || m.rows() != n * n) {
    throw shape_error("partial_trace: expected " + std::to_string(n * n) +
                      "x" + std::to_string(n * n) + " matrix");
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      complex s{};
      for (std::size_t k = 0; k < n; ++k) {
        s += side == Side::first ? m(k * n + i, k * n + j)
                                 : m(i * n + k, j * n + k);
      }
      out(i, j) = s;
    }
  return out;
}

/// Row-major flattening into a column vector.
inline Matrix vectorize(const Matrix& m) {
  return Matrix(m.size(), 1,
                std::vector<complex>(m.data().begin(), m.data().end()));
}

/// Inverse of vectorize for an n x n matrix.
inline Matrix unvectorize(std::span<const complex> v, std::size_t n) {
  if (v.size() != n * n) throw shape_error("unvectorize: length != n^2");
  return Matrix(n, n, std::vector<complex>(v.begin(), v.end()));
}

inline Matrix column_of(const Matrix& m, std::size_t j) {
  Matrix c(m.rows(), 1);
  for (std::size_t i = 0; i < m.rows(); ++i) c(i, 0) = m(i, j);
  return c;
}

/// Stacks equal-length column vectors side by side.
inline Matrix hstack(std::span<const Matrix> columns) {
  if (columns.empty()) return {};
  const std::size_t rows = columns.front().size();
  Matrix out(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto d = columns[j].data();
    if (d.size() != rows) throw shape_error("hstack: ragged columns");
    for (std::size_t i = 0; i < rows; ++i) out(i, j) = d[i];
  }
  return out;
}

/// ||m - m*||_F relative to ||m||_F (zero for the zero matrix).
inline double hermitian_defect(const Matrix& m) {
  if (!m.is_square()) throw shape_error("hermitian_defect: non-square");
  double num = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      num += std::norm(m(i, j) - std::conj(m(j, i)));
  const double den = frobenius_norm(m);
  return den == 0.0 ? 0.0 : std::sqrt(num) / den;
}

struct EigenDecomposition {
  /// Descending.
  std::vector<double> values;
  /// Column k is the eigenvector of values[k].
  Matrix vectors;
  int sweeps = 0;
};

namespace detail {

// Makes the first entry whose modulus exceeds rel * max|entry| real positive.
inline void normalize_phase(std::span<complex> v, double rel) {
  double big = 0.0;
  for (const auto& z : v) big = std::max(big, std::abs(z));
  if (big == 0.0) return;
  for (const auto& z : v) {
    const double mag = std::abs(z);
    if (mag > rel * big) {
      const complex phase = std::conj(z) / mag;
      for (auto& w : v) w *= phase;
      return;
    }
  }
}

}  // namespace detail

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Throws contract_error if m is not Hermitian to residual_abs_tol (relative
/// to ||m||_F) and numerical_error if the off-diagonal mass does not drop
/// below eig_off_diag_tol * ||m||_F within eig_max_sweeps sweeps.
inline EigenDecomposition hermitian_eig(const Matrix& m,
                                        const Tolerances& tol = {}) {
  tol.validate();
  if (!m.is_square()) throw shape_error("hermitian_eig: non-square input");
  if (hermitian_defect(m) > tol.residual_abs_tol) {
    throw contract_error("hermitian_eig: input is not Hermitian");
  }
  const std::size_t n = m.rows();

  // Work on the Hermitian part so the tolerated asymmetry does not leak in.
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
      a(j, i) = std::conj(a(i, j));
    }
  }
  // Row k of vt is eigenvector k, conjugated back at the end.
  Matrix vt = Matrix::identity(n);

  const double scale = frobenius_norm(a);
  auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
  };

  int sweep = 0;
  while (scale > 0.0 && off_mass() >= tol.eig_off_diag_tol * scale) {
    if (sweep == tol.eig_max_sweeps) {
      throw numerical_error("hermitian_eig: Jacobi did not converge", sweep);
    }
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex apq = a(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (sweep > 4 && std::abs(app) + 100.0 * g == std::abs(app) &&
            std::abs(aqq) + 100.0 * g == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        // Phase-rotate index q so the pivot becomes the real number g, then
        // apply the real Jacobi rotation.
        const complex ph = apq / g;
        const double theta = 0.5 * (aqq - app) / g;
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        complex* rp = &a(p, 0);
        complex* rq = &a(q, 0);
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const complex x = rp[r];
          const complex y = ph * rq[r];
          const complex np = c * x - s * y;
          const complex nq = s * x + c * y;
          rp[r] = np;
          rq[r] = nq;
          a(r, p) = std::conj(np);
          a(r, q) = std::conj(nq);
        }
        a(p, p) = app - t * g;
        a(q, q) = aqq + t * g;
        a(p, q) = a(q, p) = 0.0;

        complex* vp = &vt(p, 0);
        complex* vq = &vt(q, 0);
        for (std::size_t r = 0; r < n; ++r) {
          const complex x = vp[r];
          const complex y = ph * vq[r];
          vp[r] = c * x - s * y;
          vq[r] = s * x + c * y;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigenDecomposition out;
  out.sweeps = sweep;
  out.values.reserve(n);
  out.vectors = Matrix(n, n);
  std::vector<complex> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values.push_back(a(src, src).real());
    for (std::size_t r = 0; r < n; ++r) v[r] = std::conj(vt(src, r));
    detail::normalize_phase(v, tol.rank_rel_tol);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v[r];
  }
  return out;
}

/// Singular values (descending) by one-sided Hestenes-Jacobi rotations.
///
/// Orthogonalizes the columns of m (or of m* when m is wide) implicitly,
/// which is Jacobi on m*m without forming the product.
inline std::vector<double> singular_values(const Matrix& m,
                                           const Tolerances& tol = {}) {
  tol.validate();
  const bool wide = m.cols() > m.rows();
  const std::size_t ncols = wide ? m.rows() : m.cols();
  const std::size_t len = wide ? m.cols() : m.rows();
  if (ncols == 0 || len == 0) return {};

  // Column-major split storage keeps the inner loops contiguous.
  std::vector<double> re(ncols * len), im(ncols * len);
  for (std::size_t j = 0; j < ncols; ++j)
    for (std::size_t i = 0; i < len; ++i) {
      const complex z = wide ? std::conj(m(j, i)) : m(i, j);
      re[j * len + i] = z.real();
      im[j * len + i] = z.imag();
    }
  std::vector<double> norm2(ncols);
  auto column_norm2 = [&](std::size_t j) {
    const double* xr = &re[j * len];
    const double* xi = &im[j * len];
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += xr[i] * xr[i] + xi[i] * xi[i];
    return s;
  };
  double fro2 = 0.0;
  for (std::size_t j = 0; j < ncols; ++j) fro2 += norm2[j] = column_norm2(j);
  // A column at rounding-noise level cannot be made orthogonal to a large
  // one; it is left alone (its singular value is far below any rank cut).
  const double eps = std::numeric_limits<double>::epsilon();
  const double negligible = fro2 * (64.0 * eps) * (64.0 * eps);

  const double orth_tol =
      std::max(1e-15, 2.0 * std::sqrt(static_cast<double>(len)) *
                          std::numeric_limits<double>::epsilon());
  int sweep = 0;
  bool rotated = true;
  while (rotated) {
    if (sweep == tol.eig_max_sweeps) {
      throw numerical_error("singular_values: Jacobi did not converge", sweep);
    }
    ++sweep;
    rotated = false;
    for (std::size_t p = 0; p + 1 < ncols; ++p) {
      for (std::size_t q = p + 1; q < ncols; ++q) {
        const double alpha = norm2[p];
        const double beta = norm2[q];
        if (alpha <= negligible || beta <= negligible) continue;
        double* xr = &re[p * len];
        double* xi = &im[p * len];
        double* yr = &re[q * len];
        double* yi = &im[q * len];
        // gamma = <x, y> = sum conj(x) y
        double gr = 0.0, gi = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
          gr += xr[i] * yr[i] + xi[i] * yi[i];
          gi += xr[i] * yi[i] - xi[i] * yr[i];
        }
        const double g = std::hypot(gr, gi);
        if (g <= orth_tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        // y <- conj(phase) y makes <x, y> = g real, then a real rotation.
        const double cr = gr / g;
        const double ci = -gi / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < len; ++i) {
          const double ur = cr * yr[i] - ci * yi[i];
          const double ui = cr * yi[i] + ci * yr[i];
          const double x0r = xr[i];
          const double x0i = xi[i];
          xr[i] = c * x0r - s * ur;
          xi[i] = c * x0i - s * ui;
          yr[i] = s * x0r + c * ur;
          yi[i] = s * x0i + c * ui;
        }
        norm2[p] = column_norm2(p);
        norm2[q] = column_norm2(q);
      }
    }
  }

  std::vector<double> sv(ncols);
  for (std::size_t j = 0; j < ncols; ++j) sv[j] = std::sqrt(norm2[j]);
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

/// Number of singular values above rank_rel_tol times the largest.
inline std::size_t rank(const Matrix& m, const Tolerances& tol = {}) {
  const auto sv = singular_values(m, tol);
  if (sv.empty() || sv.front() == 0.0) return 0;
  const double cut = tol.rank_rel_tol * sv.front();
  return static_cast<std::size_t>(
      std::count_if(sv.begin(), sv.end(), [&](double s) { return s > cut; }));
}

/// Modified Gram-Schmidt (two passes) over the columns; columns whose
/// residual falls below rank_rel_tol times the largest input column norm
/// are dropped.
inline Matrix orthonormalize(const Matrix& columns, const Tolerances& tol = {}) {
  tol.validate();
  const std::size_t rows = columns.rows();
  double biggest = 0.0;
  for (std::size_t j = 0; j < columns.cols(); ++j)
    biggest = std::max(biggest, frobenius_norm(column_of(columns, j)));

  std::vector<std::vector<complex>> basis;
  for (std::size_t j = 0; j < columns.cols(); ++j) {
    std::vector<complex> v(rows);
    for (std::size_t i = 0; i < rows; ++i) v[i] = columns(i, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        complex proj{};
        for (std::size_t i = 0; i < rows; ++i) proj += std::conj(b[i]) * v[i];
        for (std::size_t i = 0; i < rows; ++i) v[i] -= proj * b[i];
      }
    }
    double nrm = 0.0;
    for (const auto& z : v) nrm += std::norm(z);
    nrm = std::sqrt(nrm);
    if (biggest == 0.0 || nrm <= tol.rank_rel_tol * biggest) continue;
    for (auto& z : v) z /= nrm;
    basis.push_back(std::move(v));
  }

  Matrix q(rows, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) q(i, j) = basis[j][i];
  return q;
}

/// f(m) for Hermitian m through its spectral decomposition.
template <typename F>
Matrix hermitian_function(const Matrix& m, F&& f, const Tolerances& tol = {}) {
  const auto eig = hermitian_eig(m, tol);
  const std::size_t n = m.rows();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(eig.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const complex vik = eig.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += vik * std::conj(eig.vectors(j, k));
    }
  }
  return out;
}

}  // namespace mts
