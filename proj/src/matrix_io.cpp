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

#include "pcs/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pcs/error.hpp"

namespace pcs::io {
namespace {

[[noreturn]] void parse_error(const std::string& msg) {
  throw Error(ErrorKind::ParseError, "matrix text: " + msg);
}

bool next_token(std::istream& in, std::string& tok) {
  return static_cast<bool>(in >> tok);
}

double parse_entry(const std::string& tok) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) parse_error("bad number '" + tok + "'");
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::NonFiniteInput, "matrix text: non-finite entry '" +
                                               tok + "'");
  }
  return v;
}

std::size_t parse_dim(const std::string& tok) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    parse_error("bad dimension '" + tok + "'");
  }
  return v;
}

}  // namespace

DenseMatrix parse_matrix(std::istream& in) {
  std::string header;
  while (header.find_first_not_of(" \t\r") == std::string::npos) {
    if (!std::getline(in, header)) parse_error("missing header line");
  }
  std::istringstream hs(header);
  std::string rtok, ctok, extra;
  if (!(hs >> rtok >> ctok) || (hs >> extra)) {
    parse_error("header must be 'rows cols'");
  }
  const std::size_t rows = parse_dim(rtok);
  const std::size_t cols = parse_dim(ctok);
  if (rows == 0 || cols == 0) parse_error("dimensions must be positive");

  std::vector<double> entries;
  entries.reserve(rows * cols);
  std::string line;
  std::size_t row = 0;
  while (row < rows && std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string tok;
    std::size_t count = 0;
    while (next_token(ls, tok)) {
      entries.push_back(parse_entry(tok));
      ++count;
    }
    if (count != cols) {
      parse_error("row " + std::to_string(row + 1) + " has " +
                  std::to_string(count) + " entries, expected " +
                  std::to_string(cols));
    }
    ++row;
  }
  if (row != rows) parse_error("expected " + std::to_string(rows) + " rows");
  std::string trailing;
  while (std::getline(in, trailing)) {
    if (trailing.find_first_not_of(" \t\r") != std::string::npos) {
      parse_error("trailing content after last row");
    }
  }
  return DenseMatrix(rows, cols, std::move(entries));
}

DenseMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix(in);
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_matrix(const DenseMatrix& m) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string format_vector(const Vector& v) {
  return format_matrix(DenseMatrix::column_vector(v));
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  }
  return parse_matrix(in);
}

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  }
  out << format_matrix(m);
}

Vector read_vector(const std::filesystem::path& path) {
  const DenseMatrix m = read_matrix(path);
  if (m.rows() != 1 && m.cols() != 1) {
    throw Error(ErrorKind::ParseError,
                path.string() + ": expected an n x 1 or 1 x n vector");
  }
  return Vector(m.entries().begin(), m.entries().end());
}

void write_vector(const std::filesystem::path& path, const Vector& v) {
  write_matrix(path, DenseMatrix::column_vector(v));
}

}  // namespace pcs::io
