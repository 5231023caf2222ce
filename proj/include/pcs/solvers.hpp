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

#ifndef PCS_SOLVERS_HPP
#define PCS_SOLVERS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "pcs/linalg.hpp"

namespace pcs {

namespace lp {

/// min c^T x  s.t.  A x = b,  x >= 0.
struct StandardFormLp {
  DenseMatrix a;
  Vector b;
  Vector c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
  std::size_t pivots = 0;
};

/// Dense two-phase primal simplex with Bland's lowest-index rule.
///
/// Phase one declares infeasibility when the artificial objective stays above
/// `infeasibility_tol * max(1, |b|_inf)`. Redundant equality rows are dropped
/// after phase one. The final basic solution is recomputed from the basis
/// columns by a QR solve so the returned vertex carries no accumulated
/// tableau drift.
LpResult solve_standard_form(const StandardFormLp& problem,
                             double infeasibility_tol = 1e-9);

}  // namespace lp

struct SolveOptions {
  std::size_t max_iters = 20000;
  double abs_tol = 1e-8;
  double rel_tol = 1e-6;
  double penalty = 1.0;
  /// Residual balancing of the penalty (off by default for determinism of
  /// iteration counts across option sets).
  bool adaptive_penalty = false;
  /// Absent means unit weights.
  std::optional<Vector> weights;

  /// Throws InvalidArgument / DimensionMismatch for n unknowns.
  void validate(std::size_t n) const;
  Vector weights_or_ones(std::size_t n) const;
};

enum class SolveStatus { Converged, MaxIters, Infeasible };

std::string_view to_string(SolveStatus status);

struct SolveReport {
  Vector x;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::Converged;
};

double weighted_l1(std::span<const double> x, std::span<const double> w);

/// sign(v_i) * max(|v_i| - t_i, 0); t_i = 0 passes v_i through.
Vector soft_threshold(std::span<const double> v, std::span<const double> t);

/// Exact weighted basis pursuit through the split x = x+ - x- LP.
/// Throws Infeasible when y is outside range(A).
SolveReport simplex_l1(const DenseMatrix& a, std::span<const double> y,
                       std::span<const double> weights);

/// Weighted basis pursuit by two-block ADMM: projection onto {Ax = y}
/// alternating with soft thresholding. Throws Infeasible when the
/// least-squares residual of y exceeds 1e-6 * |y|_2.
SolveReport admm_basis_pursuit(const DenseMatrix& a, std::span<const double> y,
                               const SolveOptions& opts = {});

/// Weighted basis pursuit denoising, min sum w_i|x_i| s.t. |Ax - y|_2 <= eta,
/// by consensus ADMM over the stacked constraint (x = z, Ax = w).
SolveReport admm_bpdn(const DenseMatrix& a, std::span<const double> y,
                      double eta, const SolveOptions& opts = {});

}  // namespace pcs

#endif  // PCS_SOLVERS_HPP
