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

#include "pcs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pcs/error.hpp"

namespace pcs {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

[[noreturn]] void mismatch(const char* where) {
  throw Error(ErrorKind::DimensionMismatch,
              std::string("dimension mismatch in ") + where);
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) mismatch("DenseMatrix constructor");
  linalg::require_finite(entries_, "matrix entries");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows == 0 ? 0 : rows.begin()->size();
  std::vector<double> entries;
  entries.reserve(n_rows * n_cols);
  for (const auto& row : rows) {
    if (row.size() != n_cols) mismatch("DenseMatrix::from_rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return DenseMatrix(n_rows, n_cols, std::move(entries));
}

DenseMatrix DenseMatrix::column_vector(std::span<const double> v) {
  return DenseMatrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

Vector DenseMatrix::column(std::size_t j) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix DenseMatrix::column_range(std::size_t begin, std::size_t end) const {
  if (begin > end || end > cols_) mismatch("DenseMatrix::column_range");
  DenseMatrix out(rows_, end - begin);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = begin; j < end; ++j) out(i, j - begin) = (*this)(i, j);
  return out;
}

DenseMatrix DenseMatrix::select_columns(
    std::span<const std::size_t> indices) const {
  DenseMatrix out(rows_, indices.size());
  for (std::size_t c = 0; c < indices.size(); ++c) {
    if (indices[c] >= cols_) mismatch("DenseMatrix::select_columns");
    for (std::size_t i = 0; i < rows_; ++i) out(i, c) = (*this)(i, indices[c]);
  }
  return out;
}

namespace linalg {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::NonFiniteInput,
                  std::string("non-finite value in ") + what);
    }
  }
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) mismatch("multiply(matrix, matrix)");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += ail * b(l, j);
    }
  return out;
}

Vector multiply(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) mismatch("multiply(matrix, vector)");
  Vector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto row = a.row(i);
    out[i] = std::inner_product(row.begin(), row.end(), x.begin(), 0.0);
  }
  return out;
}

Vector multiply_transposed(const DenseMatrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) mismatch("multiply_transposed");
  Vector out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    auto row = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += row[j] * xi;
  }
  return out;
}

DenseMatrix gram(const DenseMatrix& a) {
  const std::size_t n = a.cols();
  DenseMatrix g(n, n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto row = a.row(i);
    for (std::size_t p = 0; p < n; ++p) {
      const double rp = row[p];
      if (rp == 0.0) continue;
      for (std::size_t q = p; q < n; ++q) g(p, q) += rp * row[q];
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < p; ++q) g(p, q) = g(q, p);
  return g;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) mismatch("subtract");
  DenseMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
  return out;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) mismatch("subtract(vector)");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector add(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) mismatch("add(vector)");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vector scale(std::span<const double> a, double factor) {
  Vector out(a.begin(), a.end());
  for (double& v : out) v *= factor;
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) mismatch("dot");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> v) {
  // Scaled accumulation keeps tiny and huge entries representable.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double x : v) {
    const double t = x / scale;
    sum += t * t;
  }
  return scale * std::sqrt(sum);
}

double norm1(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += std::abs(x);
  return sum;
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const DenseMatrix& m) { return norm_inf(m.entries()); }

double frobenius_norm(const DenseMatrix& m) { return norm2(m.entries()); }

namespace {

// Column-major work copy with one Householder vector per factored column.
struct Householder {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> a;       // column-major m x n; R on and above diagonal
  std::vector<Vector> vs;      // reflector vectors (length m - k)
  std::vector<double> betas;   // 0 marks an identity step
  std::vector<std::size_t> perm;

  double& at(std::size_t i, std::size_t j) { return a[j * m + i]; }
  double at(std::size_t i, std::size_t j) const { return a[j * m + i]; }

  double column_tail_norm(std::size_t j, std::size_t from) const {
    return norm2(std::span<const double>(a.data() + j * m + from, m - from));
  }
};

Householder householder(const DenseMatrix& mat, bool pivot) {
  Householder h;
  h.m = mat.rows();
  h.n = mat.cols();
  h.a.resize(h.m * h.n);
  for (std::size_t i = 0; i < h.m; ++i)
    for (std::size_t j = 0; j < h.n; ++j) h.at(i, j) = mat(i, j);
  h.perm.resize(h.n);
  std::iota(h.perm.begin(), h.perm.end(), std::size_t{0});

  const std::size_t steps = std::min(h.m, h.n);
  for (std::size_t k = 0; k < steps; ++k) {
    if (pivot) {
      std::size_t best = k;
      double best_norm = h.column_tail_norm(k, k);
      for (std::size_t j = k + 1; j < h.n; ++j) {
        const double nj = h.column_tail_norm(j, k);
        if (nj > best_norm) {
          best = j;
          best_norm = nj;
        }
      }
      if (best != k) {
        std::swap_ranges(h.a.begin() + k * h.m, h.a.begin() + (k + 1) * h.m,
                         h.a.begin() + best * h.m);
        std::swap(h.perm[k], h.perm[best]);
      }
    }

    const std::size_t len = h.m - k;
    Vector v(len);
    for (std::size_t i = 0; i < len; ++i) v[i] = h.at(k + i, k);
    const double below = norm2(std::span<const double>(v).subspan(1));
    if (below == 0.0) {
      h.vs.push_back(Vector(len, 0.0));
      h.betas.push_back(0.0);
      continue;
    }
    const double x0 = v[0];
    const double alpha = (x0 >= 0.0 ? -1.0 : 1.0) * std::hypot(x0, below);
    v[0] = x0 - alpha;
    const double vtv = dot(v, v);
    const double beta = 2.0 / vtv;

    h.at(k, k) = alpha;
    for (std::size_t i = 1; i < len; ++i) h.at(k + i, k) = 0.0;
    for (std::size_t j = k + 1; j < h.n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < len; ++i) s += v[i] * h.at(k + i, j);
      s *= beta;
      if (s == 0.0) continue;
      for (std::size_t i = 0; i < len; ++i) h.at(k + i, j) -= s * v[i];
    }
    h.vs.push_back(std::move(v));
    h.betas.push_back(beta);
  }
  return h;
}

// Q restricted to its first q_cols columns: apply reflectors in reverse to
// the leading columns of the identity.
DenseMatrix form_q(const Householder& h, std::size_t q_cols) {
  DenseMatrix q(h.m, q_cols);
  for (std::size_t j = 0; j < std::min(h.m, q_cols); ++j) q(j, j) = 1.0;
  for (std::size_t kk = h.vs.size(); kk-- > 0;) {
    if (h.betas[kk] == 0.0) continue;
    const Vector& v = h.vs[kk];
    for (std::size_t j = 0; j < q_cols; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * q(kk + i, j);
      s *= h.betas[kk];
      if (s == 0.0) continue;
      for (std::size_t i = 0; i < v.size(); ++i) q(kk + i, j) -= s * v[i];
    }
  }
  return q;
}

double max_abs_diagonal(const Householder& h) {
  double m = 0.0;
  for (std::size_t k = 0; k < std::min(h.m, h.n); ++k)
    m = std::max(m, std::abs(h.at(k, k)));
  return m;
}

std::size_t count_rank(const Householder& h, double tol) {
  std::size_t rank = 0;
  for (std::size_t k = 0; k < std::min(h.m, h.n); ++k)
    if (std::abs(h.at(k, k)) > tol) ++rank;
  return rank;
}

}  // namespace

double default_rank_tolerance(std::size_t rows, std::size_t cols,
                              double max_abs_diag) {
  const double tol = 1e-10 * static_cast<double>(std::max(rows, cols)) *
                     max_abs_diag;
  // An all-zero matrix has rank 0; keep the tolerance strictly positive.
  return tol > 0.0 ? tol : std::numeric_limits<double>::min();
}

QrFactorization qr_factor(const DenseMatrix& m, double rank_tolerance) {
  if (m.empty()) {
    throw Error(ErrorKind::InvalidArgument, "qr_factor: empty matrix");
  }
  if (!(rank_tolerance > 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "qr_factor: rank tolerance must be positive");
  }
  require_finite(m.entries(), "qr_factor input");
  const Householder h = householder(m, /*pivot=*/false);
  const std::size_t p = std::min(m.rows(), m.cols());
  QrFactorization out;
  out.q = form_q(h, p);
  out.r = DenseMatrix(p, m.cols());
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < m.cols(); ++j) out.r(i, j) = h.at(i, j);
  out.rank_tolerance = rank_tolerance;
  out.rank = count_rank(h, rank_tolerance);
  return out;
}

QrFactorization qr_factor(const DenseMatrix& m) {
  if (m.empty()) {
    throw Error(ErrorKind::InvalidArgument, "qr_factor: empty matrix");
  }
  require_finite(m.entries(), "qr_factor input");
  const Householder h = householder(m, false);
  return qr_factor(
      m, default_rank_tolerance(m.rows(), m.cols(), max_abs_diagonal(h)));
}

LeastSquaresSolver::LeastSquaresSolver(const DenseMatrix& m) : qr_(qr_factor(m)) {
  if (qr_.rank < m.cols()) {
    throw Error(ErrorKind::RankDeficient,
                "least squares: matrix has rank " + std::to_string(qr_.rank) +
                    " < " + std::to_string(m.cols()) + " columns");
  }
}

Vector LeastSquaresSolver::solve(std::span<const double> b) const {
  if (b.size() != rows()) mismatch("LeastSquaresSolver::solve");
  const std::size_t n = cols();
  Vector rhs = multiply_transposed(qr_.q, b);
  Vector x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= qr_.r(i, j) * x[j];
    x[i] = s / qr_.r(i, i);
  }
  return x;
}

Vector least_squares_solve(const DenseMatrix& m, std::span<const double> b) {
  if (b.size() != m.rows()) mismatch("least_squares_solve");
  require_finite(b, "least_squares_solve rhs");
  return LeastSquaresSolver(m).solve(b);
}

Projector build_projector(const DenseMatrix& a2) {
  const std::size_t k = a2.rows();
  Projector out;
  out.p = DenseMatrix::identity(k);
  if (a2.cols() == 0) return out;
  if (a2.cols() > k) {
    throw Error(ErrorKind::RankDeficient,
                "projector: dense block has more columns than rows");
  }
  out.a2_pseudo = LeastSquaresSolver(a2);
  const DenseMatrix& q = out.a2_pseudo.factorization().q;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      const double s = dot(q.row(i), q.row(j));
      out.p(i, j) -= s;
      if (i != j) out.p(j, i) -= s;
    }
  return out;
}

OrthogonalSplit orthogonal_split(const DenseMatrix& m, double tol) {
  require_finite(m.entries(), "orthogonal_split input");
  const std::size_t n = m.cols();
  OrthogonalSplit out;
  if (m.rows() == 0 || n == 0) {
    out.row_space = DenseMatrix(n, 0);
    out.null_space = DenseMatrix::identity(n);
    return out;
  }
  const Householder h = householder(m.transpose(), /*pivot=*/true);
  if (tol <= 0.0) tol = default_rank_tolerance(m.rows(), n, max_abs_diagonal(h));
  out.rank = count_rank(h, tol);
  const DenseMatrix q = form_q(h, n);
  out.row_space = q.column_range(0, out.rank);
  out.null_space = q.column_range(out.rank, n);
  return out;
}

DenseMatrix null_space_basis(const DenseMatrix& m, double tol) {
  if (m.empty()) {
    throw Error(ErrorKind::InvalidArgument, "null_space_basis: empty matrix");
  }
  return orthogonal_split(m, tol).null_space;
}

Vector sym_eig(const DenseMatrix& g) {
  const std::size_t n = g.rows();
  if (g.cols() != n) mismatch("sym_eig (matrix not square)");
  require_finite(g.entries(), "sym_eig input");
  const double sym_tol = 1e-10 * std::max(1.0, max_abs(g));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(g(i, j) - g(j, i)) > sym_tol) {
        throw Error(ErrorKind::NotSymmetric, "sym_eig: matrix not symmetric");
      }

  DenseMatrix a = g;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = avg;
      a(j, i) = avg;
    }
  const double target = 1e-12 * frobenius_norm(g);
  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
  }

  Vector eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double spectral_norm(const DenseMatrix& m) {
  if (m.empty()) {
    throw Error(ErrorKind::InvalidArgument, "spectral_norm: empty matrix");
  }
  const DenseMatrix g =
      m.rows() >= m.cols() ? gram(m) : gram(m.transpose());
  const Vector eig = sym_eig(g);
  return std::sqrt(std::max(eig.back(), 0.0));
}

double smallest_singular_value(const DenseMatrix& m) {
  if (m.empty()) {
    throw Error(ErrorKind::InvalidArgument,
                "smallest_singular_value: empty matrix");
  }
  if (m.rows() < m.cols()) return 0.0;
  const Vector eig = sym_eig(gram(m));
  return std::sqrt(std::max(eig.front(), 0.0));
}

Cholesky::Cholesky(const DenseMatrix& spd) : l_(spd.rows(), spd.cols()) {
  const std::size_t n = spd.rows();
  if (spd.cols() != n) mismatch("Cholesky (matrix not square)");
  for (std::size_t j = 0; j < n; ++j) {
    double d = spd(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
    if (!(d > 0.0)) {
      throw Error(ErrorKind::NumericalBreakdown,
                  "Cholesky: matrix not positive definite");
    }
    l_(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = spd(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
      l_(i, j) = s / l_(j, j);
    }
  }
}

Vector Cholesky::solve(std::span<const double> b) const {
  const std::size_t n = l_.rows();
  if (b.size() != n) mismatch("Cholesky::solve");
  Vector z(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) z[i] -= l_(i, k) * z[k];
    z[i] /= l_(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) z[i] -= l_(k, i) * z[k];
    z[i] /= l_(i, i);
  }
  return z;
}

}  // namespace linalg
}  // namespace pcs
