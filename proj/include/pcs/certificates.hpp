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

#ifndef PCS_CERTIFICATES_HPP
#define PCS_CERTIFICATES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcs/linalg.hpp"
#include "pcs/partial.hpp"

namespace pcs {

using Support = std::vector<std::size_t>;

/// Exhaustive certificates refuse (TooLarge) instead of sampling.
inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;
/// Margin used when a strict inequality is tested in floating point.
inline constexpr double kStrictMargin = 1e-9;

/// Binomial coefficient saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k);

/// Advance `c` (strictly increasing, values < n) to the next combination in
/// lexicographic order; false after the last one.
bool next_combination(Support& c, std::size_t n);

struct NspReport {
  std::string property = "nsp";
  bool holds = true;
  std::size_t order = 0;
  /// max over supports S of max_{v in N, |v|_1 = 1} |v_S|_1.
  double worst_ratio = 0.0;
  std::optional<Vector> witness_v;
  std::optional<Support> witness_support;
};

struct RipReport {
  std::string property = "rip";
  std::size_t order = 0;
  double delta = 0.0;
  Support witness_support;
  double extreme_eigenvalue = 1.0;
};

/// delta_s = max over |S| = s of max(lambda_max - 1, 1 - lambda_min) of the
/// Gram matrix A_S^T A_S. Order 0 is vacuous (delta = 0).
RipReport rip_constant(const DenseMatrix& a, std::size_t s,
                       std::uint64_t cap = kDefaultEnumerationCap);

/// rip_constant(P A1, s - r).
RipReport partial_rip_constant(const PartitionedMatrix& part, std::size_t s,
                               std::uint64_t cap = kDefaultEnumerationCap);

/// Smallest delta with (1-delta)|x|^2 <= |Ax|^2 <= (1+delta)|x|^2 over x with
/// an (s-r)-sparse first block and an unrestricted second block.
RipReport mixed_rip_constant(const PartitionedMatrix& part, std::size_t s,
                             std::uint64_t cap = kDefaultEnumerationCap);

/// Null space property of order s, solved exactly: for each support and sign
/// pattern, maximize sigma^T v_S over v in N(A) with |v|_1 <= 1 by simplex.
NspReport nsp_check(const DenseMatrix& a, std::size_t s,
                    std::uint64_t cap = kDefaultEnumerationCap);

/// nsp_check(P A1, s - r); {v1 : A1 v1 in range(A2)} = N(P A1).
NspReport partial_nsp_check(const PartitionedMatrix& part, std::size_t s,
                            std::uint64_t cap = kDefaultEnumerationCap);

/// delta_2s < sqrt(2) - 1, strictly.
bool recovery_guarantee(double delta_2s);

struct DenseBlockConstants {
  double c1 = 0.0;  // |A1|_2
  double c2 = 0.0;  // |A2^+|_2 = 1 / sigma_min(A2); 0 when r = 0
};

DenseBlockConstants c1_c2(const PartitionedMatrix& part);

struct ConstantBoundsReport {
  std::size_t order = 0;
  double delta_s = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c1_bound = 0.0;  // sqrt(1 + delta_s)
  double c2_bound = 0.0;  // 1 / sqrt(1 - delta_s), +inf when delta_s >= 1
  double c1_slack = 0.0;
  double c2_slack = 0.0;
  bool c2_checked = false;           // s >= r
  bool c2_holds = false;
  bool c1_order_sufficient = false;  // s >= N - r
  bool c1_holds = false;             // evaluated regardless of sufficiency
};

ConstantBoundsReport check_c1_c2_bounds(
    const PartitionedMatrix& part, std::size_t s,
    std::uint64_t cap = kDefaultEnumerationCap);

/// Measurement count above which a Gaussian A = (A1, A2) has partial RIP
/// constant <= delta with high probability (natural logarithms):
///   96 / (3 d^2 - d^3) * ((s - r) ln((N - r) e / (s - r)) + s ln(12 / d)).
/// The (s - r) term is 0 when s = r.
double gaussian_sample_bound(std::size_t n, std::size_t s, std::size_t r,
                             double delta);

/// sigma_s(x)_1: l1 mass outside the s largest magnitudes.
double best_s_term_error(std::span<const double> x, std::size_t s);

struct SparsestSolution {
  Vector x;
  std::size_t sparsity = 0;
  bool unique = false;
};

/// Brute-force min |x|_0 s.t. Ax = y over supports of size <= s_max.
SparsestSolution exhaustive_l0(const DenseMatrix& a, std::span<const double> y,
                               std::size_t s_max,
                               std::uint64_t cap = kDefaultEnumerationCap);

/// FNV-1a over the shape and the IEEE bytes of the entries.
std::uint64_t matrix_hash(const DenseMatrix& m);

std::string certificate_json(const NspReport& report, std::uint64_t hash);
std::string certificate_json(const RipReport& report, std::uint64_t hash);

}  // namespace pcs

#endif  // PCS_CERTIFICATES_HPP
