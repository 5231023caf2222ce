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

#include "pcs/partial.hpp"

#include <cmath>

#include "pcs/error.hpp"

namespace pcs {

Vector PartiallySparseSignal::joined() const {
  Vector x = x1;
  x.insert(x.end(), x2.begin(), x2.end());
  return x;
}

Vector PartialSolution::joined() const {
  Vector x = x1;
  x.insert(x.end(), x2.begin(), x2.end());
  return x;
}

std::string_view to_string(Route route) {
  return route == Route::Projected ? "projected" : "direct";
}

PartitionedMatrix::PartitionedMatrix(DenseMatrix a, std::size_t r)
    : a_(std::move(a)), r_(r) {
  if (a_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "split_matrix: empty matrix");
  }
  if (r_ > std::min(a_.rows(), a_.cols())) {
    throw Error(ErrorKind::InvalidArgument,
                "split_matrix: r must satisfy 0 <= r <= min(rows, cols)");
  }
  a1_ = a_.column_range(0, a_.cols() - r_);
  a2_ = a_.column_range(a_.cols() - r_, a_.cols());
  // Throws RankDeficient when the dense block's columns are dependent.
  projector_ = linalg::build_projector(a2_);
  pa1_ = linalg::multiply(projector_.p, a1_);
}

Vector PartitionedMatrix::solve_dense_block(std::span<const double> rhs) const {
  if (r_ == 0) return {};
  return projector_.a2_pseudo.solve(rhs);
}

PartitionedMatrix split_matrix(const DenseMatrix& a, std::size_t r) {
  return PartitionedMatrix(a, r);
}

ReducedProblem reduce_problem(const PartitionedMatrix& part,
                              std::span<const double> y) {
  if (y.size() != part.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "reduce_problem: y length");
  }
  linalg::require_finite(y, "reduce_problem measurements");
  return ReducedProblem{part.pa1(), linalg::multiply(part.projector().p, y)};
}

namespace {

Vector x1_weights(const PartitionedMatrix& part, const SolveOptions& opts) {
  const std::size_t n1 = part.sparse_cols();
  if (opts.weights && opts.weights->size() != n1) {
    throw Error(ErrorKind::DimensionMismatch,
                "recover: weights must cover the sparse block only");
  }
  return opts.weights_or_ones(n1);
}

// Back-solve x2 and fill the residual of A2 x2 = y - A1 x1.
void finish(const PartitionedMatrix& part, std::span<const double> y,
            PartialSolution& sol) {
  const Vector rhs = linalg::subtract(y, linalg::multiply(part.a1(), sol.x1));
  if (sol.x2.empty()) sol.x2 = part.solve_dense_block(rhs);
  const Vector fit = part.r() == 0 ? Vector(part.rows(), 0.0)
                                   : linalg::multiply(part.a2(), sol.x2);
  sol.x2_residual = linalg::norm2(linalg::subtract(fit, rhs));
}

}  // namespace

PartialSolution recover_projected(const PartitionedMatrix& part,
                                  std::span<const double> y, double eta,
                                  const RecoverOptions& opts) {
  if (!std::isfinite(eta) || eta < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "recover: eta must be >= 0");
  }
  const ReducedProblem reduced = reduce_problem(part, y);
  const Vector w = x1_weights(part, opts.solver);

  PartialSolution sol;
  sol.route = Route::Projected;
  if (part.r() == part.rows()) {
    // P = 0: the reduced problem carries no information about x1.
    sol.x1.assign(part.sparse_cols(), 0.0);
    sol.x1_report.x = sol.x1;
    sol.warnings.push_back(
        "r equals the number of rows: projector is zero, x1 set to 0");
    finish(part, y, sol);
    return sol;
  }

  SolveOptions solver = opts.solver;
  solver.weights = w;
  if (eta == 0.0) {
    sol.x1_report = opts.method == Method::Simplex
                        ? simplex_l1(reduced.pa1, reduced.py, w)
                        : admm_basis_pursuit(reduced.pa1, reduced.py, solver);
  } else {
    sol.x1_report = admm_bpdn(reduced.pa1, reduced.py, eta, solver);
  }
  sol.x1 = sol.x1_report.x;
  finish(part, y, sol);
  return sol;
}

PartialSolution recover_direct(const PartitionedMatrix& part,
                               std::span<const double> y, double eta,
                               const RecoverOptions& opts) {
  if (!std::isfinite(eta) || eta < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "recover: eta must be >= 0");
  }
  if (y.size() != part.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "recover_direct: y length");
  }
  Vector w = x1_weights(part, opts.solver);
  w.resize(part.cols(), 0.0);

  SolveOptions solver = opts.solver;
  solver.weights = w;
  PartialSolution sol;
  sol.route = Route::Direct;
  SolveReport report;
  if (eta == 0.0) {
    report = opts.method == Method::Simplex
                 ? simplex_l1(part.a(), y, w)
                 : admm_basis_pursuit(part.a(), y, solver);
  } else {
    report = admm_bpdn(part.a(), y, eta, solver);
  }
  const std::size_t n1 = part.sparse_cols();
  sol.x1.assign(report.x.begin(), report.x.begin() + static_cast<std::ptrdiff_t>(n1));
  sol.x2.assign(report.x.begin() + static_cast<std::ptrdiff_t>(n1), report.x.end());
  sol.x1_report = std::move(report);
  if (part.r() == 0) sol.x2.clear();
  finish(part, y, sol);
  return sol;
}

}  // namespace pcs
