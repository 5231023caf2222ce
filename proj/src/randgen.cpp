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

#include "pcs/randgen.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include "pcs/error.hpp"

namespace pcs {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Seed Seed::derive(std::uint64_t tag) const {
  return Seed{base, splitmix64(stream + kGolden * (tag + 1))};
}

std::uint64_t parse_seed_value(std::string_view text) {
  int radix = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
    radix = 16;
  }
  std::uint64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value, radix);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::ParseError,
                "seed must be a decimal or 0x-hex 64-bit integer");
  }
  return value;
}

std::string format_seed(const Seed& seed) {
  return std::to_string(seed.base) + ":" + std::to_string(seed.stream);
}

Rng::Rng(const Seed& seed) : engine_(seed.base ^ (seed.stream * kGolden)) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open_low() {
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = uniform_open_low();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "uniform_index(0)");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return static_cast<std::size_t>(v % bound);
}

void SignalModel::validate() const {
  if (magnitude == Magnitude::UniformInRange &&
      !(lo > 0.0 && hi >= lo && std::isfinite(hi))) {
    throw Error(ErrorKind::InvalidArgument,
                "signal model: need 0 < lo <= hi for UniformInRange");
  }
  if (magnitude == Magnitude::GeometricDecay && !(decay > 0.0 && decay <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "signal model: decay must lie in (0, 1]");
  }
}

DenseMatrix gaussian_matrix(std::size_t k, std::size_t n, const Seed& seed) {
  if (k == 0 || n == 0) {
    throw Error(ErrorKind::InvalidArgument, "gaussian_matrix: k, n must be >= 1");
  }
  Rng rng(seed);
  const double sd = 1.0 / std::sqrt(static_cast<double>(k));
  std::vector<double> entries(k * n);
  for (double& e : entries) e = sd * rng.normal();
  return DenseMatrix(k, n, std::move(entries));
}

PartiallySparseSignal planted_signal(std::size_t n_minus_r, std::size_t sparsity,
                                     std::size_t r, const SignalModel& model,
                                     const Seed& seed) {
  if (sparsity > n_minus_r) {
    throw Error(ErrorKind::InvalidArgument,
                "planted_signal: sparsity exceeds the sparse block length");
  }
  model.validate();
  Rng rng(seed);
  PartiallySparseSignal sig;
  sig.x1.assign(n_minus_r, 0.0);
  sig.x2.assign(r, 0.0);
  sig.declared_sparsity = sparsity;
  sig.exactly_sparse = model.magnitude != SignalModel::Magnitude::GeometricDecay;

  // Partial Fisher-Yates: the first `sparsity` slots form the support, in
  // draw order.
  std::vector<std::size_t> idx(n_minus_r);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < sparsity; ++i) {
    const std::size_t j = i + rng.uniform_index(n_minus_r - i);
    std::swap(idx[i], idx[j]);
  }
  double geometric = 1.0;
  for (std::size_t i = 0; i < sparsity; ++i) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    double mag = 1.0;
    switch (model.magnitude) {
      case SignalModel::Magnitude::UnitMagnitudeRandomSign:
        mag = 1.0;
        break;
      case SignalModel::Magnitude::UniformInRange:
        mag = model.lo + (model.hi - model.lo) * rng.uniform();
        break;
      case SignalModel::Magnitude::GeometricDecay:
        mag = geometric;
        geometric *= model.decay;
        break;
    }
    sig.x1[idx[i]] = sign * mag;
  }
  for (double& v : sig.x2) v = rng.normal();
  return sig;
}

Vector noise_on_ball(std::size_t k, double eta, const Seed& seed, bool boundary) {
  if (!std::isfinite(eta) || eta < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "noise_on_ball: eta must be >= 0");
  }
  Vector e(k, 0.0);
  if (eta == 0.0 || k == 0) return e;
  Rng rng(seed);
  double len = 0.0;
  do {
    for (double& v : e) v = rng.normal();
    len = linalg::norm2(e);
  } while (len == 0.0);
  double radius = eta;
  if (!boundary) {
    radius = eta * std::pow(rng.uniform_open_low(), 1.0 / static_cast<double>(k));
  }
  for (double& v : e) v *= radius / len;
  // Rounding may overshoot by an ulp; shrink until the bound is exact.
  while (linalg::norm2(e) > eta) {
    for (double& v : e) v *= 1.0 - 0x1.0p-52;
  }
  return e;
}

}  // namespace pcs
