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

#ifndef PCS_RANDGEN_HPP
#define PCS_RANDGEN_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "pcs/linalg.hpp"
#include "pcs/partial.hpp"

namespace pcs {

/// (base, stream) pins every generated value within one build.
struct Seed {
  std::uint64_t base = 0;
  std::uint64_t stream = 0;

  /// Sub-stream for a named purpose: stream' = splitmix64(stream + golden *
  /// (tag + 1)); the base is kept.
  Seed derive(std::uint64_t tag) const;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// Accepts decimal or 0x-prefixed hexadecimal 64-bit integers.
std::uint64_t parse_seed_value(std::string_view text);
std::string format_seed(const Seed& seed);

std::uint64_t splitmix64(std::uint64_t x);

/// mt19937_64 seeded with base ^ (stream * 0x9E3779B97F4A7C15).
class Rng {
 public:
  explicit Rng(const Seed& seed);

  std::uint64_t next_u64() { return engine_(); }
  /// 53-bit uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_low();
  /// Box-Muller, cosine branch only: exactly two raw draws per sample.
  double normal();
  /// Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

struct SignalModel {
  enum class Magnitude { UnitMagnitudeRandomSign, UniformInRange, GeometricDecay };

  Magnitude magnitude = Magnitude::UniformInRange;
  double lo = 0.5;     // UniformInRange bounds, lo > 0
  double hi = 2.0;
  double decay = 0.5;  // GeometricDecay ratio in (0, 1]

  void validate() const;
};

/// Entries i.i.d. N(0, 1/k).
DenseMatrix gaussian_matrix(std::size_t k, std::size_t n, const Seed& seed);

/// x1 has exactly `sparsity` nonzeros on a uniformly drawn support (for
/// GeometricDecay the j-th drawn coordinate gets magnitude decay^j); x2 is
/// standard Gaussian.
PartiallySparseSignal planted_signal(std::size_t n_minus_r, std::size_t sparsity,
                                     std::size_t r, const SignalModel& model,
                                     const Seed& seed);

/// Isotropic noise with |e|_2 = eta (boundary) or uniform in the eta-ball.
/// The returned vector never exceeds eta in norm2.
Vector noise_on_ball(std::size_t k, double eta, const Seed& seed, bool boundary);

}  // namespace pcs

#endif  // PCS_RANDGEN_HPP
