// Copyright 2026 The partial_cs Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PCS_LINALG_HPP
#define PCS_LINALG_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pcs {

using Vector = std::vector<double>;

/// Row-major dense matrix of finite doubles.
///
/// Zero-sized shapes are representable (a k x 0 null-space basis is a valid
/// answer), but every constructor rejects NaN and Inf entries.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix column_vector(std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  Vector column(std::size_t j) const;

  DenseMatrix transpose() const;
  /// Columns [begin, end).
  DenseMatrix column_range(std::size_t begin, std::size_t end) const;
  DenseMatrix select_columns(std::span<const std::size_t> indices) const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

namespace linalg {

// Elementwise and BLAS-like helpers. Dimension mismatches throw
// ErrorKind::DimensionMismatch.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
Vector multiply(const DenseMatrix& a, std::span<const double> x);
Vector multiply_transposed(const DenseMatrix& a, std::span<const double> x);
DenseMatrix gram(const DenseMatrix& a);  // A^T A
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector add(std::span<const double> a, std::span<const double> b);
Vector scale(std::span<const double> a, double factor);
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm1(std::span<const double> v);
double norm_inf(std::span<const double> v);
double max_abs(const DenseMatrix& m);
double frobenius_norm(const DenseMatrix& m);

void require_finite(std::span<const double> v, const char* what);

struct QrFactorization {
  DenseMatrix q;  // rows x min(rows, cols), orthonormal columns
  DenseMatrix r;  // min(rows, cols) x cols, upper triangular
  std::size_t rank = 0;
  double rank_tolerance = 0.0;
};

/// Scale-aware rank tolerance: 1e-10 * max(rows, cols) * max|R_ii|.
double default_rank_tolerance(std::size_t rows, std::size_t cols,
                              double max_abs_diag);

/// Householder QR without pivoting. Columns already zero below the diagonal
/// are left unreflected, so triangular inputs factor as Q = I.
QrFactorization qr_factor(const DenseMatrix& m, double rank_tolerance);
QrFactorization qr_factor(const DenseMatrix& m);

/// Precomputed least-squares state for a full-column-rank matrix.
class LeastSquaresSolver {
 public:
  LeastSquaresSolver() = default;
  explicit LeastSquaresSolver(const DenseMatrix& m);

  Vector solve(std::span<const double> b) const;
  std::size_t rows() const noexcept { return qr_.q.rows(); }
  std::size_t cols() const noexcept { return qr_.r.cols(); }
  const QrFactorization& factorization() const noexcept { return qr_; }

 private:
  QrFactorization qr_;
};

Vector least_squares_solve(const DenseMatrix& m, std::span<const double> b);

/// Orthogonal projector onto range(A2)^perp, P = I - Q1 Q1^T from the thin QR
/// of A2. An A2 with zero columns gives the identity.
struct Projector {
  DenseMatrix p;
  LeastSquaresSolver a2_pseudo;
};

Projector build_projector(const DenseMatrix& a2);

/// Orthonormal bases of range(M^T) and N(M), read off a column-pivoted
/// Householder QR of M^T.
struct OrthogonalSplit {
  DenseMatrix row_space;   // cols(M) x rank
  DenseMatrix null_space;  // cols(M) x (cols(M) - rank)
  std::size_t rank = 0;
};

OrthogonalSplit orthogonal_split(const DenseMatrix& m, double tol = 0.0);

/// tol <= 0 selects the default rank tolerance.
DenseMatrix null_space_basis(const DenseMatrix& m, double tol = 0.0);

/// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
Vector sym_eig(const DenseMatrix& g);

double spectral_norm(const DenseMatrix& m);
/// sigma_min of a matrix with rows >= cols, via lambda_min(M^T M).
double smallest_singular_value(const DenseMatrix& m);

/// Dense Cholesky factor of a symmetric positive definite matrix.
class Cholesky {
 public:
  explicit Cholesky(const DenseMatrix& spd);
  Vector solve(std::span<const double> b) const;

 private:
  DenseMatrix l_;
};

}  // namespace linalg
}  // namespace pcs

#endif  // PCS_LINALG_HPP
