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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "pcs/error.hpp"
#include "pcs/linalg.hpp"
#include "pcs/randgen.hpp"
#include "test_support.hpp"

using namespace pcs;
using pcs::testing::max_abs_diff;

namespace {

DenseMatrix random_matrix(std::size_t k, std::size_t n, std::uint64_t seed) {
  return gaussian_matrix(k, n, Seed{seed, 0});
}

void check_qr_invariants(const DenseMatrix& m) {
  const auto qr = linalg::qr_factor(m);
  const DenseMatrix qtq = linalg::gram(qr.q);
  CHECK(max_abs_diff(qtq, DenseMatrix::identity(qtq.rows())) <= 1e-10);
  CHECK(max_abs_diff(linalg::multiply(qr.q, qr.r), m) <=
        1e-9 * (1.0 + linalg::max_abs(m)));
  for (std::size_t i = 0; i < qr.r.rows(); ++i)
    for (std::size_t j = 0; j < std::min(i, qr.r.cols()); ++j) CHECK(qr.r(i, j) == 0.0);
  std::size_t rank = 0;
  for (std::size_t i = 0; i < std::min(qr.r.rows(), qr.r.cols()); ++i)
    if (std::abs(qr.r(i, i)) > qr.rank_tolerance) ++rank;
  CHECK(rank == qr.rank);
}

}  // namespace

TEST_CASE("dense matrix rejects bad construction") {
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1, 2, 3}), Error);
  try {
    DenseMatrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()});
    FAIL("expected NonFiniteInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFiniteInput);
  }
  const auto m = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(1, 2) == 6);
  CHECK(m.transpose()(2, 1) == 6);
  CHECK(m.column(1) == Vector{2, 5});
  const std::size_t idx[] = {2, 0};
  CHECK(m.select_columns(idx) == DenseMatrix::from_rows({{3, 1}, {6, 4}}));
}

TEST_CASE("qr of the identity is trivial") {
  const auto qr = linalg::qr_factor(DenseMatrix::identity(3));
  CHECK(qr.q == DenseMatrix::identity(3));
  CHECK(qr.r == DenseMatrix::identity(3));
  CHECK(qr.rank == 3);
}

TEST_CASE("qr of a single column gives its norm") {
  const auto qr = linalg::qr_factor(DenseMatrix::from_rows({{3}, {4}}));
  CHECK(std::abs(qr.r(0, 0)) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(qr.rank == 1);
}

TEST_CASE("qr invariants on random shapes") {
  pcs::testing::for_all(11, 30, [](const Seed& s, std::size_t i) {
    Rng rng(s);
    const std::size_t rows = 1 + rng.uniform_index(9);
    const std::size_t cols = 1 + rng.uniform_index(9);
    CAPTURE(i);
    check_qr_invariants(gaussian_matrix(rows, cols, s));
  });
  check_qr_invariants(random_matrix(8, 5, 3));
}

TEST_CASE("qr rank detects dependent columns") {
  auto m = random_matrix(6, 4, 5);
  for (std::size_t i = 0; i < 6; ++i) m(i, 3) = m(i, 0) - 2.0 * m(i, 1);
  // Unpivoted QR still places the deficiency on the last diagonal entry.
  CHECK(linalg::qr_factor(m).rank == 3);
}

TEST_CASE("least squares on consistent and inconsistent systems") {
  const auto sq = random_matrix(5, 5, 21);
  const Vector x0{1, -2, 0.5, 3, -1};
  const Vector x = linalg::least_squares_solve(sq, linalg::multiply(sq, x0));
  CHECK(max_abs_diff(x, x0) <= 1e-10);
  // Square oracle: elimination on the same system.
  CHECK(max_abs_diff(pcs::testing::gauss_solve(sq, linalg::multiply(sq, x0)), x) <= 1e-10);

  const auto tall = random_matrix(9, 4, 22);
  const Vector x1{0.25, -1, 2, 0};
  CHECK(max_abs_diff(linalg::least_squares_solve(tall, linalg::multiply(tall, x1)), x1) <=
        1e-10);

  Rng rng(Seed{23, 0});
  Vector b(9);
  for (double& v : b) v = rng.normal();
  const Vector xl = linalg::least_squares_solve(tall, b);
  const Vector normal =
      linalg::multiply_transposed(tall, linalg::subtract(linalg::multiply(tall, xl), b));
  CHECK(linalg::norm_inf(normal) <= 1e-8);

  auto deficient = tall;
  for (std::size_t i = 0; i < 9; ++i) deficient(i, 2) = deficient(i, 1);
  try {
    linalg::least_squares_solve(deficient, b);
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankDeficient);
  }
  CHECK_THROWS_AS(linalg::least_squares_solve(tall, Vector(3)), Error);
}

TEST_CASE("projector examples") {
  const auto p = linalg::build_projector(DenseMatrix::from_rows({{1}, {0}})).p;
  CHECK(max_abs_diff(p, DenseMatrix::from_rows({{0, 0}, {0, 1}})) <= 1e-15);

  const auto q = linalg::qr_factor(random_matrix(6, 2, 31)).q;  // orthonormal
  const auto p2 = linalg::build_projector(q).p;
  auto expected = DenseMatrix::identity(6);
  expected = linalg::subtract(expected, linalg::multiply(q, q.transpose()));
  CHECK(max_abs_diff(p2, expected) <= 1e-12);

  CHECK(linalg::build_projector(DenseMatrix(4, 0)).p == DenseMatrix::identity(4));
}

TEST_CASE("projector invariants on random dense blocks") {
  pcs::testing::for_all(41, 20, [](const Seed& s, std::size_t) {
    Rng rng(s);
    const std::size_t k = 3 + rng.uniform_index(8);
    const std::size_t r = 1 + rng.uniform_index(k - 1);
    const auto a2 = gaussian_matrix(k, r, s.derive(1));
    const auto p = linalg::build_projector(a2).p;
    CHECK(max_abs_diff(linalg::multiply(p, p), p) <= 1e-9);
    CHECK(max_abs_diff(p, p.transpose()) <= 1e-10);
    CHECK(linalg::max_abs(linalg::multiply(p, a2)) <= 1e-9);
  });
}

TEST_CASE("null space basis") {
  CHECK(linalg::null_space_basis(DenseMatrix::identity(3)).cols() == 0);
  const auto b = linalg::null_space_basis(DenseMatrix::from_rows({{1, 1}}));
  REQUIRE(b.cols() == 1);
  CHECK(std::abs(std::abs(b(0, 0)) - 1 / std::sqrt(2.0)) <= 1e-12);
  CHECK(std::abs(b(0, 0) + b(1, 0)) <= 1e-12);

  const auto m = random_matrix(6, 10, 51);
  const auto nb = linalg::null_space_basis(m);
  CHECK(nb.cols() == 4);
  CHECK(linalg::max_abs(linalg::multiply(m, nb)) <= 1e-8);
  CHECK(max_abs_diff(linalg::gram(nb), DenseMatrix::identity(4)) <= 1e-9);

  const auto split = linalg::orthogonal_split(m);
  CHECK(split.rank == 6);
  CHECK(linalg::max_abs(linalg::multiply(split.row_space.transpose(), split.null_space)) <=
        1e-10);
}

TEST_CASE("symmetric eigenvalues") {
  const auto e1 = linalg::sym_eig(DenseMatrix::from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}}));
  CHECK(e1 == Vector{1, 2, 3});
  const auto e2 = linalg::sym_eig(DenseMatrix::from_rows({{2, 1}, {1, 2}}));
  CHECK(e2[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e2[1] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(linalg::sym_eig(DenseMatrix::from_rows({{1, 2}, {0, 1}})), Error);

  pcs::testing::for_all(61, 20, [](const Seed& s, std::size_t) {
    const auto g = linalg::gram(gaussian_matrix(7, 5, s));
    const auto ev = linalg::sym_eig(g);
    CHECK(std::is_sorted(ev.begin(), ev.end()));
    double trace = 0, sum = 0, prod = 1;
    for (std::size_t i = 0; i < 5; ++i) {
      trace += g(i, i);
      sum += ev[i];
      prod *= ev[i];
    }
    const double det = pcs::testing::lu_determinant(g);
    CHECK(std::abs(sum - trace) <= 1e-8 * std::abs(trace));
    CHECK(std::abs(prod - det) <= 1e-8 * std::abs(det));
  });
}

TEST_CASE("spectral norm") {
  CHECK(linalg::spectral_norm(DenseMatrix::identity(4)) == doctest::Approx(1.0));
  CHECK(linalg::spectral_norm(DenseMatrix::from_rows({{3, 0}, {0, 1}})) ==
        doctest::Approx(3.0));
  CHECK(linalg::smallest_singular_value(DenseMatrix::from_rows({{2}, {0}})) ==
        doctest::Approx(2.0));

  const auto m = random_matrix(6, 4, 71);
  const double sn = linalg::spectral_norm(m);
  Rng rng(Seed{72, 0});
  double oracle = 0.0;
  for (int t = 0; t < 1000; ++t) {
    Vector v(4);
    for (double& x : v) x = rng.normal();
    const double nv = linalg::norm2(v);
    oracle = std::max(oracle, linalg::norm2(linalg::multiply(m, v)) / nv);
  }
  CHECK(sn >= oracle - 1e-8);
  // |M|_2^2 <= |M|_F^2.
  CHECK(sn <= linalg::frobenius_norm(m) + 1e-12);
}

TEST_CASE("cholesky solves and rejects indefinite input") {
  const auto a = random_matrix(8, 5, 81);
  auto spd = linalg::gram(a);
  const Vector b{1, 2, 3, 4, 5};
  const Vector x = linalg::Cholesky(spd).solve(b);
  CHECK(max_abs_diff(x, pcs::testing::gauss_solve(spd, b)) <= 1e-9);
  try {
    linalg::Cholesky(DenseMatrix::from_rows({{1, 2}, {2, 1}}));
    FAIL("expected NumericalBreakdown");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NumericalBreakdown);
  }
}

TEST_CASE("norms do not overflow") {
  const Vector big{1e200, 1e200};
  CHECK(linalg::norm2(big) == doctest::Approx(std::sqrt(2.0) * 1e200));
  CHECK(linalg::norm1(Vector{3, -4}) == 7);
  CHECK(linalg::norm_inf(Vector{3, -4}) == 4);
  CHECK(linalg::norm2(Vector{}) == 0.0);
}
