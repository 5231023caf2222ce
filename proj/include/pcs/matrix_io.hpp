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

#ifndef PCS_MATRIX_IO_HPP
#define PCS_MATRIX_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "pcs/linalg.hpp"

namespace pcs::io {

// Text format: first line "rows cols", then `rows` lines of `cols`
// whitespace-separated decimal floats. NaN and Inf are rejected.
DenseMatrix parse_matrix(std::istream& in);
DenseMatrix parse_matrix(const std::string& text);
std::string format_matrix(const DenseMatrix& m);

DenseMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const DenseMatrix& m);

// Vectors use the same format as an n x 1 (or 1 x n) matrix.
Vector read_vector(const std::filesystem::path& path);
void write_vector(const std::filesystem::path& path, const Vector& v);
std::string format_vector(const Vector& v);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

}  // namespace pcs::io

#endif  // PCS_MATRIX_IO_HPP
