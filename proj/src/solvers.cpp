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

#include "pcs/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pcs/error.hpp"

namespace pcs {

using linalg::norm2;

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIters: return "MaxIters";
    case SolveStatus::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

void SolveOptions::validate(std::size_t n) const {
  if (max_iters < 1) {
    throw Error(ErrorKind::InvalidArgument, "max_iters must be >= 1");
  }
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
  }
  if (!(penalty > 0.0) || !std::isfinite(penalty)) {
    throw Error(ErrorKind::InvalidArgument, "penalty must be positive");
  }
  if (weights) {
    if (weights->size() != n) {
      throw Error(ErrorKind::DimensionMismatch,
                  "weights length " + std::to_string(weights->size()) +
                      " != " + std::to_string(n));
    }
    for (double w : *weights) {
      if (!std::isfinite(w) || w < 0.0) {
        throw Error(ErrorKind::InvalidArgument,
                    "weights must be finite and nonnegative");
      }
    }
  }
}

Vector SolveOptions::weights_or_ones(std::size_t n) const {
  return weights ? *weights : Vector(n, 1.0);
}

double weighted_l1(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size()) {
    throw Error(ErrorKind::DimensionMismatch, "weighted_l1: length mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (w[i] != 0.0) s += w[i] * std::abs(x[i]);
  }
  return s;
}

Vector soft_threshold(std::span<const double> v, std::span<const double> t) {
  if (v.size() != t.size()) {
    throw Error(ErrorKind::DimensionMismatch, "soft_threshold: length mismatch");
  }
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(t[i]) || t[i] < 0.0) {
      throw Error(ErrorKind::InvalidArgument,
                  "soft_threshold: thresholds must be finite and >= 0");
    }
    if (t[i] == 0.0) {
      out[i] = v[i];
      continue;
    }
    const double mag = std::abs(v[i]) - t[i];
    out[i] = mag > 0.0 ? std::copysign(mag, v[i]) : 0.0;
  }
  return out;
}

SolveReport simplex_l1(const DenseMatrix& a, std::span<const double> y,
                       std::span<const double> weights) {
  const std::size_t k = a.rows();
  const std::size_t n = a.cols();
  if (y.size() != k || weights.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "simplex_l1: y or weights length");
  }
  linalg::require_finite(y, "simplex_l1 measurements");
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorKind::InvalidArgument,
                  "simplex_l1: weights must be finite and nonnegative");
    }
  }

  // Rank-deficient rows (always the case for P A1) are compressed onto an
  // orthonormal basis U of range(A): A x = y  <=>  U^T A x = U^T y once y is
  // checked to lie in range(A). Redundant rows otherwise force near-singular
  // pivots in the tableau.
  DenseMatrix rows = a;
  Vector rhs(y.begin(), y.end());
  const linalg::OrthogonalSplit range = linalg::orthogonal_split(a.transpose());
  if (range.rank < k) {
    const DenseMatrix& u = range.row_space;  // k x rank
    rhs = linalg::multiply_transposed(u, y);
    const Vector outside = linalg::subtract(y, linalg::multiply(u, rhs));
    if (norm2(outside) > 1e-9 * (1.0 + norm2(y))) {
      throw Error(ErrorKind::Infeasible, "simplex_l1: y is not in range(A)");
    }
    rows = linalg::multiply(u.transpose(), a);
  }

  const std::size_t m = rows.rows();
  lp::StandardFormLp problem;
  problem.a = DenseMatrix(m, 2 * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      problem.a(i, j) = rows(i, j);
      problem.a(i, n + j) = -rows(i, j);
    }
  problem.b = rhs;
  problem.c.resize(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    problem.c[j] = weights[j];
    problem.c[n + j] = weights[j];
  }

  const lp::LpResult lp_result = lp::solve_standard_form(problem);
  if (lp_result.status == lp::LpStatus::Infeasible) {
    throw Error(ErrorKind::Infeasible, "simplex_l1: y is not in range(A)");
  }
  if (lp_result.status == lp::LpStatus::Unbounded) {
    throw Error(ErrorKind::NumericalBreakdown,
                "simplex_l1: LP reported unbounded with nonnegative weights");
  }

  SolveReport report;
  report.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    report.x[j] = lp_result.x[j] - lp_result.x[n + j];
  }
  report.objective = weighted_l1(report.x, weights);
  report.primal_residual =
      norm2(linalg::subtract(linalg::multiply(a, report.x), y));
  if (report.primal_residual > 1e-7 * (1.0 + norm2(y))) {
    throw Error(ErrorKind::NumericalBreakdown,
                "simplex_l1: vertex violates Ax = y beyond 1e-7 relative");
  }
  report.dual_residual = 0.0;
  report.iterations = lp_result.pivots;
  report.status = SolveStatus::Converged;
  return report;
}

namespace {

// Residual balancing: keep primal and dual residuals within a factor of mu.
// Adaptation stops after this many iterations so the fixed-penalty
// convergence guarantee applies to the tail.
constexpr std::size_t kAdaptUntil = 1000;

bool rebalance(double primal, double dual, double& rho) {
  constexpr double kMu = 10.0;
  constexpr double kTau = 2.0;
  if (primal > kMu * dual) {
    rho *= kTau;
    return true;
  }
  if (dual > kMu * primal) {
    rho /= kTau;
    return true;
  }
  return false;
}

Vector thresholds(const Vector& w, double rho) {
  Vector t(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) t[i] = w[i] / rho;
  return t;
}

}  // namespace

SolveReport admm_basis_pursuit(const DenseMatrix& a, std::span<const double> y,
                               const SolveOptions& opts) {
  const std::size_t n = a.cols();
  if (y.size() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "admm_basis_pursuit: y length");
  }
  linalg::require_finite(y, "admm_basis_pursuit measurements");
  opts.validate(n);
  const Vector w = opts.weights_or_ones(n);

  // Affine set {x : Ax = y} = x_p + N(A), with x_p the least-norm solution
  // expressed in an orthonormal basis C of range(A^T).
  const linalg::OrthogonalSplit split = linalg::orthogonal_split(a);
  const DenseMatrix& c = split.row_space;
  Vector x_p(n, 0.0);
  if (split.rank > 0) {
    const Vector coeff =
        linalg::least_squares_solve(linalg::multiply(a, c), y);
    x_p = linalg::multiply(c, coeff);
  }
  const double y_norm = norm2(y);
  const double infeasibility =
      norm2(linalg::subtract(linalg::multiply(a, x_p), y));
  if (infeasibility > 1e-6 * y_norm) {
    throw Error(ErrorKind::Infeasible,
                "admm_basis_pursuit: y is not in range(A) (least-squares "
                "residual " + std::to_string(infeasibility) + ")");
  }
  auto project = [&](const Vector& v) {
    Vector d = linalg::subtract(v, x_p);
    const Vector coords = linalg::multiply_transposed(c, d);
    const Vector back = linalg::multiply(c, coords);
    return linalg::subtract(v, back);
  };

  double rho = opts.penalty;
  Vector x = x_p;
  Vector z = soft_threshold(x, thresholds(w, rho));
  Vector u(n, 0.0);
  SolveReport report;
  report.status = SolveStatus::MaxIters;
  for (std::size_t it = 1; it <= opts.max_iters; ++it) {
    x = project(linalg::subtract(z, u));
    const Vector z_old = z;
    z = soft_threshold(linalg::add(x, u), thresholds(w, rho));
    for (std::size_t i = 0; i < n; ++i) u[i] += x[i] - z[i];

    const double primal = norm2(linalg::subtract(x, z));
    const double dual = rho * norm2(linalg::subtract(z, z_old));
    const double eps_primal =
        opts.abs_tol + opts.rel_tol * std::max(norm2(x), norm2(z));
    const double eps_dual = opts.abs_tol + opts.rel_tol * rho * norm2(u);
    report.iterations = it;
    report.primal_residual = primal;
    report.dual_residual = dual;
    if (primal <= eps_primal && dual <= eps_dual) {
      report.status = SolveStatus::Converged;
      break;
    }
    if (opts.adaptive_penalty && it < kAdaptUntil && it % 10 == 0) {
      const double old_rho = rho;
      if (rebalance(primal, dual, rho)) {
        for (double& ui : u) ui *= old_rho / rho;
      }
    }
  }
  report.x = std::move(x);
  report.objective = weighted_l1(report.x, w);
  return report;
}

SolveReport admm_bpdn(const DenseMatrix& a, std::span<const double> y,
                      double eta, const SolveOptions& opts) {
  const std::size_t k = a.rows();
  const std::size_t n = a.cols();
  if (y.size() != k) {
    throw Error(ErrorKind::DimensionMismatch, "admm_bpdn: y length");
  }
  if (!std::isfinite(eta) || eta < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "admm_bpdn: eta must be >= 0");
  }
  linalg::require_finite(y, "admm_bpdn measurements");
  opts.validate(n);
  const Vector w = opts.weights_or_ones(n);

  SolveReport report;
  if (norm2(y) <= eta) {
    // The origin is feasible and has zero objective.
    report.x.assign(n, 0.0);
    report.primal_residual = 0.0;
    report.dual_residual = 0.0;
    report.iterations = 0;
    report.status = SolveStatus::Converged;
    return report;
  }

  DenseMatrix normal = linalg::gram(a);
  for (std::size_t i = 0; i < n; ++i) normal(i, i) += 1.0;
  const linalg::Cholesky chol(normal);

  auto project_ball = [&](Vector v) {
    const Vector d = linalg::subtract(v, y);
    const double dist = norm2(d);
    if (dist <= eta) return v;
    const double f = eta / dist;
    for (std::size_t i = 0; i < k; ++i) v[i] = y[i] + f * d[i];
    return v;
  };

  double rho = opts.penalty;
  Vector x(n, 0.0);
  Vector z(n, 0.0);
  Vector wv(y.begin(), y.end());
  Vector uz(n, 0.0);
  Vector uw(k, 0.0);
  report.status = SolveStatus::MaxIters;
  for (std::size_t it = 1; it <= opts.max_iters; ++it) {
    const Vector rhs = linalg::add(
        linalg::subtract(z, uz),
        linalg::multiply_transposed(a, linalg::subtract(wv, uw)));
    x = chol.solve(rhs);
    const Vector ax = linalg::multiply(a, x);
    const Vector z_old = z;
    const Vector w_old = wv;
    z = soft_threshold(linalg::add(x, uz), thresholds(w, rho));
    wv = project_ball(linalg::add(ax, uw));
    for (std::size_t i = 0; i < n; ++i) uz[i] += x[i] - z[i];
    for (std::size_t i = 0; i < k; ++i) uw[i] += ax[i] - wv[i];

    const double rz = norm2(linalg::subtract(x, z));
    const double rw = norm2(linalg::subtract(ax, wv));
    const double primal = std::hypot(rz, rw);
    Vector dual_vec = linalg::subtract(z, z_old);
    const Vector dw = linalg::multiply_transposed(a, linalg::subtract(wv, w_old));
    for (std::size_t i = 0; i < n; ++i) dual_vec[i] = rho * (dual_vec[i] + dw[i]);
    const double dual = norm2(dual_vec);

    const double primal_scale =
        std::max({norm2(x), norm2(z), norm2(ax), norm2(wv)});
    const Vector at_uw = linalg::multiply_transposed(a, uw);
    const double dual_scale = rho * norm2(linalg::add(uz, at_uw));
    report.iterations = it;
    report.primal_residual = primal;
    report.dual_residual = dual;
    if (primal <= opts.abs_tol + opts.rel_tol * primal_scale &&
        dual <= opts.abs_tol + opts.rel_tol * dual_scale) {
      report.status = SolveStatus::Converged;
      break;
    }
    if (opts.adaptive_penalty && it < kAdaptUntil && it % 10 == 0) {
      const double old_rho = rho;
      if (rebalance(primal, dual, rho)) {
        for (double& v : uz) v *= old_rho / rho;
        for (double& v : uw) v *= old_rho / rho;
      }
    }
  }
  report.x = std::move(x);
  report.objective = weighted_l1(report.x, w);
  return report;
}

}  // namespace pcs
