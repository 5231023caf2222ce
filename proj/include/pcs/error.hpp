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

#ifndef PCS_ERROR_HPP
#define PCS_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcs {

enum class ErrorKind {
  NonFiniteInput,
  DimensionMismatch,
  RankDeficient,
  NotSymmetric,
  Infeasible,
  NumericalBreakdown,
  TooLarge,
  DomainError,
  NoSolution,
  InsufficientData,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every library failure is reported through this exception; `kind()` is the
/// machine-readable category and maps onto CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pcs

#endif  // PCS_ERROR_HPP
