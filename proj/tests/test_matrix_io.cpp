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

#include <filesystem>

#include "doctest.h"
#include "pcs/error.hpp"
#include "pcs/matrix_io.hpp"
#include "pcs/randgen.hpp"

using namespace pcs;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    io::parse_matrix(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("parse unexpectedly succeeded: " << text);
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("parse a small matrix") {
  const auto m = io::parse_matrix("2 3\n1 2 3\n-4.5 5e-3 6\n");
  CHECK(m == DenseMatrix::from_rows({{1, 2, 3}, {-4.5, 5e-3, 6}}));
  // Whitespace layout is free.
  CHECK(io::parse_matrix("2 3\n1  2\t3\n\n -4.5   5e-3 6\n\n") == m);
}

TEST_CASE("parser rejects malformed input") {
  CHECK(kind_of("") == ErrorKind::ParseError);
  CHECK(kind_of("2 2\n1 2 3") == ErrorKind::ParseError);
  CHECK(kind_of("1 2\n1 2 3") == ErrorKind::ParseError);
  CHECK(kind_of("1 2\n1 x") == ErrorKind::ParseError);
  CHECK(kind_of("0 2\n") == ErrorKind::ParseError);
  CHECK(kind_of("1 2\n1 nan") == ErrorKind::NonFiniteInput);
  CHECK(kind_of("1 2\ninf 1") == ErrorKind::NonFiniteInput);
}

TEST_CASE("format then parse is the identity") {
  const auto m = gaussian_matrix(7, 5, Seed{99, 3});
  CHECK(io::parse_matrix(io::format_matrix(m)) == m);
  CHECK(io::format_double(0.1) == "0.1");
}

TEST_CASE("vectors accept either orientation") {
  const auto dir = std::filesystem::temp_directory_path() / "pcs_io_test";
  std::filesystem::create_directories(dir);
  const Vector v{1.5, -2, 3};
  io::write_vector(dir / "v.txt", v);
  CHECK(io::read_vector(dir / "v.txt") == v);
  io::write_matrix(dir / "row.txt", DenseMatrix(1, 3, v));
  CHECK(io::read_vector(dir / "row.txt") == v);
  io::write_matrix(dir / "bad.txt", DenseMatrix(2, 2, {1, 2, 3, 4}));
  CHECK_THROWS_AS(io::read_vector(dir / "bad.txt"), Error);
  CHECK_THROWS_AS(io::read_matrix(dir / "missing.txt"), Error);
  std::filesystem::remove_all(dir);
}
