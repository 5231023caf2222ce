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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pcs/error.hpp"
#include "pcs/solvers.hpp"

namespace pcs::lp {
namespace {

constexpr double kPivotTol = 1e-12;       // smaller entries never pivot
constexpr double kOptimalityTol = 1e-10;  // reduced-cost sign threshold
constexpr double kDriveOutTol = 1e-9;     // artificial drive-out pivots
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Rows 0..m-1 are constraints, row m is the reduced-cost row. The last column
// holds the right-hand side (and minus the objective in the cost row).
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t width)
      : rows_(m + 1, Vector(width, 0.0)), basis_(m, kNone) {}

  std::size_t constraint_rows() const { return basis_.size(); }
  std::size_t width() const { return rows_.front().size(); }
  std::size_t rhs_col() const { return width() - 1; }
  Vector& row(std::size_t i) { return rows_[i]; }
  const Vector& row(std::size_t i) const { return rows_[i]; }
  Vector& cost_row() { return rows_.back(); }
  std::size_t basic(std::size_t i) const { return basis_[i]; }
  void set_basic(std::size_t i, std::size_t j) { basis_[i] = j; }

  void pivot(std::size_t pr, std::size_t pc) {
    Vector& prow = rows_[pr];
    const double piv = prow[pc];
    if (!std::isfinite(piv) || std::abs(piv) < kPivotTol) {
      throw Error(ErrorKind::NumericalBreakdown,
                  "simplex: pivot magnitude below 1e-12");
    }
    for (double& v : prow) v /= piv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (r == pr) continue;
      Vector& row = rows_[r];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < row.size(); ++j) row[j] -= f * prow[j];
      row[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  void drop_row(std::size_t i) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
  }

  // Cost row from scratch: d_j = c_j - sum_i c_B(i) T_ij.
  void price(const Vector& cost) {
    Vector& d = cost_row();
    std::fill(d.begin(), d.end(), 0.0);
    for (std::size_t j = 0; j < cost.size(); ++j) d[j] = cost[j];
    for (std::size_t i = 0; i < constraint_rows(); ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      const Vector& row = rows_[i];
      for (std::size_t j = 0; j < width(); ++j) d[j] -= cb * row[j];
    }
  }

  double objective() { return -cost_row()[rhs_col()]; }

 private:
  std::vector<Vector> rows_;
  std::vector<std::size_t> basis_;
};

enum class PhaseResult { Optimal, Unbounded };

PhaseResult run_phase(Tableau& t, std::size_t n_enter, std::size_t& pivots) {
  const std::size_t rhs = t.rhs_col();
  constexpr std::size_t kPivotCap = 5'000'000;
  for (;;) {
    Vector& d = t.cost_row();
    std::size_t enter = kNone;
    for (std::size_t j = 0; j < n_enter; ++j) {
      if (d[j] < -kOptimalityTol) {
        enter = j;
        break;
      }
    }
    if (enter == kNone) return PhaseResult::Optimal;

    std::size_t leave = kNone;
    double best = 0.0;
    for (std::size_t i = 0; i < t.constraint_rows(); ++i) {
      const double a = t.row(i)[enter];
      if (a <= kPivotTol) continue;
      const double ratio = std::max(t.row(i)[rhs], 0.0) / a;
      if (leave == kNone) {
        leave = i;
        best = ratio;
        continue;
      }
      const double slack = 1e-12 * (1.0 + best);
      if (ratio < best - slack) {
        leave = i;
        best = ratio;
      } else if (ratio <= best + slack && t.basic(i) < t.basic(leave)) {
        leave = i;
        best = std::min(best, ratio);
      }
    }
    if (leave == kNone) return PhaseResult::Unbounded;
    t.pivot(leave, enter);
    if (++pivots > kPivotCap) {
      throw Error(ErrorKind::NumericalBreakdown, "simplex: pivot cap exceeded");
    }
  }
}

}  // namespace

LpResult solve_standard_form(const StandardFormLp& problem,
                             double infeasibility_tol) {
  const std::size_t m = problem.a.rows();
  const std::size_t n = problem.a.cols();
  if (problem.b.size() != m || problem.c.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "simplex: b or c has wrong length");
  }
  linalg::require_finite(problem.b, "simplex rhs");
  linalg::require_finite(problem.c, "simplex cost");

  LpResult result;
  Tableau t(m, n + m + 1);
  const std::size_t rhs = n + m;
  std::vector<double> row_sign(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    row_sign[i] = problem.b[i] < 0.0 ? -1.0 : 1.0;
    Vector& row = t.row(i);
    for (std::size_t j = 0; j < n; ++j) row[j] = row_sign[i] * problem.a(i, j);
    row[n + i] = 1.0;
    row[rhs] = row_sign[i] * problem.b[i];
    t.set_basic(i, n + i);
  }

  // Phase one: minimize the sum of artificials.
  Vector phase_one_cost(n + m, 0.0);
  for (std::size_t i = 0; i < m; ++i) phase_one_cost[n + i] = 1.0;
  t.price(phase_one_cost);
  run_phase(t, n + m, result.pivots);
  const double b_scale = std::max(1.0, linalg::norm_inf(problem.b));
  if (t.objective() > infeasibility_tol * b_scale) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Drive remaining artificials out of the basis; rows with no usable
  // structural entry are linear combinations of the others.
  std::vector<std::size_t> kept_rows;
  for (std::size_t i = 0; i < m; ++i) kept_rows.push_back(i);
  for (std::size_t i = 0; i < t.constraint_rows();) {
    if (t.basic(i) < n) {
      ++i;
      continue;
    }
    std::size_t col = kNone;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(t.row(i)[j]) > kDriveOutTol) {
        col = j;
        break;
      }
    }
    if (col != kNone) {
      t.pivot(i, col);
      ++result.pivots;
      ++i;
    } else {
      t.drop_row(i);
      kept_rows.erase(kept_rows.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  // Phase two over structural columns only.
  Vector phase_two_cost(n + m, 0.0);
  std::copy(problem.c.begin(), problem.c.end(), phase_two_cost.begin());
  t.price(phase_two_cost);
  if (run_phase(t, n, result.pivots) == PhaseResult::Unbounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  const std::size_t mb = t.constraint_rows();
  Vector x(n, 0.0);
  for (std::size_t i = 0; i < mb; ++i) x[t.basic(i)] = std::max(t.row(i)[rhs], 0.0);

  // Refine the vertex: solve B x_B = b on the kept rows.
  if (mb > 0) {
    DenseMatrix basis_matrix(mb, mb);
    Vector b_kept(mb);
    for (std::size_t r = 0; r < mb; ++r) {
      b_kept[r] = problem.b[kept_rows[r]];
      for (std::size_t c = 0; c < mb; ++c)
        basis_matrix(r, c) = problem.a(kept_rows[r], t.basic(c));
    }
    try {
      const Vector xb = linalg::least_squares_solve(basis_matrix, b_kept);
      const double drift_tol = 1e-9 * (1.0 + linalg::norm_inf(xb));
      bool ok = true;
      for (std::size_t c = 0; c < mb; ++c) {
        if (xb[c] < -drift_tol || std::abs(xb[c] - x[t.basic(c)]) >
                                      1e-6 * (1.0 + std::abs(xb[c]))) {
          ok = false;
        }
      }
      if (ok) {
        for (std::size_t c = 0; c < mb; ++c) x[t.basic(c)] = std::max(xb[c], 0.0);
      }
    } catch (const Error&) {
      // Ill-conditioned basis: keep the tableau values.
    }
  }

  result.status = LpStatus::Optimal;
  result.objective = linalg::dot(problem.c, x);
  result.x = std::move(x);
  return result;
}

}  // namespace pcs::lp
