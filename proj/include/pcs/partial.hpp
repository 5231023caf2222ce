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

#ifndef PCS_PARTIAL_HPP
#define PCS_PARTIAL_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pcs/linalg.hpp"
#include "pcs/solvers.hpp"

namespace pcs {

/// x = (x1, x2): x1 sparse of length N - r, x2 dense of length r.
struct PartiallySparseSignal {
  Vector x1;
  Vector x2;
  std::size_t declared_sparsity = 0;
  bool exactly_sparse = true;

  Vector joined() const;
};

/// A = (A1, A2) with the dense block A2 made of the last r columns.
///
/// Construction validates that A2 has full column rank and builds the
/// projector onto range(A2)^perp together with P * A1. Instances are
/// immutable afterwards.
class PartitionedMatrix {
 public:
  PartitionedMatrix(DenseMatrix a, std::size_t r);

  const DenseMatrix& a() const noexcept { return a_; }
  std::size_t r() const noexcept { return r_; }
  std::size_t rows() const noexcept { return a_.rows(); }
  std::size_t cols() const noexcept { return a_.cols(); }
  std::size_t sparse_cols() const noexcept { return a_.cols() - r_; }

  const DenseMatrix& a1() const noexcept { return a1_; }
  const DenseMatrix& a2() const noexcept { return a2_; }
  const linalg::Projector& projector() const noexcept { return projector_; }
  const DenseMatrix& pa1() const noexcept { return pa1_; }

  /// Least-squares x2 for A2 x2 ~ rhs (empty when r = 0).
  Vector solve_dense_block(std::span<const double> rhs) const;

 private:
  DenseMatrix a_;
  std::size_t r_ = 0;
  DenseMatrix a1_;
  DenseMatrix a2_;
  linalg::Projector projector_;
  DenseMatrix pa1_;
};

PartitionedMatrix split_matrix(const DenseMatrix& a, std::size_t r);

struct ReducedProblem {
  DenseMatrix pa1;
  Vector py;
};

/// (P A1, P y).
ReducedProblem reduce_problem(const PartitionedMatrix& part,
                              std::span<const double> y);

enum class Route { Projected, Direct };
/// Engine for eta = 0; eta > 0 always uses the ball-constrained splitting.
enum class Method { Simplex, Splitting };

std::string_view to_string(Route route);

struct RecoverOptions {
  SolveOptions solver;  // weights, when set, apply to the x1 block only
  Method method = Method::Simplex;
};

struct PartialSolution {
  Vector x1;
  Vector x2;
  SolveReport x1_report;
  double x2_residual = 0.0;
  Route route = Route::Projected;
  std::vector<std::string> warnings;

  Vector joined() const;
};

/// Recover x1 from the reduced problem (P A1) x1 ~ P y, then back-solve
/// A2 x2 = y - A1 x1 in the least-squares sense.
PartialSolution recover_projected(const PartitionedMatrix& part,
                                  std::span<const double> y, double eta,
                                  const RecoverOptions& opts = {});

/// Solve the joint problem min |x1|_1 over (x1, x2) with zero weights on x2.
PartialSolution recover_direct(const PartitionedMatrix& part,
                               std::span<const double> y, double eta,
                               const RecoverOptions& opts = {});

}  // namespace pcs

#endif  // PCS_PARTIAL_HPP
