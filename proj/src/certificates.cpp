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

#include "pcs/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "pcs/error.hpp"
#include "pcs/solvers.hpp"

namespace pcs {
namespace {

void check_cap(std::uint64_t count, std::uint64_t cap, const char* what) {
  if (count > cap) {
    throw Error(ErrorKind::TooLarge,
                std::string(what) + ": enumeration of " +
                    std::to_string(count) + " cases exceeds cap " +
                    std::to_string(cap));
  }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

Support first_combination(std::size_t s) {
  Support c(s);
  std::iota(c.begin(), c.end(), std::size_t{0});
  return c;
}

struct Deviation {
  double delta;
  double eigenvalue;
};

Deviation gram_deviation(const DenseMatrix& cols) {
  const Vector eig = linalg::sym_eig(linalg::gram(cols));
  const double upper = eig.back() - 1.0;
  const double lower = 1.0 - eig.front();
  return upper >= lower ? Deviation{upper, eig.back()}
                        : Deviation{lower, eig.front()};
}

}  // namespace

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  unsigned __int128 result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // C(n-k+i, i) = C(n-k+i-1, i-1) * (n-k+i) / i, exact at every step.
    result = result * (n - k + i) / i;
    if (result > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(result);
}

bool next_combination(Support& c, std::size_t n) {
  const std::size_t s = c.size();
  for (std::size_t i = s; i-- > 0;) {
    if (c[i] < n - s + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < s; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

RipReport rip_constant(const DenseMatrix& a, std::size_t s, std::uint64_t cap) {
  if (s > a.cols()) {
    throw Error(ErrorKind::InvalidArgument, "rip_constant: order exceeds columns");
  }
  RipReport report;
  report.order = s;
  if (s == 0) return report;
  check_cap(binomial(a.cols(), s), cap, "rip_constant");

  Support support = first_combination(s);
  bool first = true;
  do {
    const Deviation dev = gram_deviation(a.select_columns(support));
    if (first || dev.delta > report.delta) {
      report.delta = dev.delta;
      report.extreme_eigenvalue = dev.eigenvalue;
      report.witness_support = support;
      first = false;
    }
  } while (next_combination(support, a.cols()));
  report.delta = std::max(report.delta, 0.0);
  return report;
}

RipReport partial_rip_constant(const PartitionedMatrix& part, std::size_t s,
                               std::uint64_t cap) {
  if (part.r() > s) {
    throw Error(ErrorKind::InvalidArgument, "partial_rip_constant: need r <= s");
  }
  RipReport report = rip_constant(part.pa1(), s - part.r(), cap);
  report.property = "partial-rip";
  return report;
}

RipReport mixed_rip_constant(const PartitionedMatrix& part, std::size_t s,
                             std::uint64_t cap) {
  const std::size_t r = part.r();
  const std::size_t n1 = part.sparse_cols();
  if (r > s || s - r > n1) {
    throw Error(ErrorKind::InvalidArgument,
                "mixed_rip_constant: need r <= s <= N");
  }
  const std::size_t t = s - r;
  check_cap(binomial(n1, t), cap, "mixed_rip_constant");
  RipReport report;
  report.property = "mixed-rip";
  report.order = s;
  if (s == 0) return report;

  Support support = first_combination(t);
  bool first = true;
  do {
    Support cols = support;
    for (std::size_t j = n1; j < part.cols(); ++j) cols.push_back(j);
    const Deviation dev = gram_deviation(part.a().select_columns(cols));
    if (first || dev.delta > report.delta) {
      report.delta = dev.delta;
      report.extreme_eigenvalue = dev.eigenvalue;
      report.witness_support = std::move(cols);
      first = false;
    }
  } while (t > 0 && next_combination(support, n1));
  report.delta = std::max(report.delta, 0.0);
  return report;
}

NspReport nsp_check(const DenseMatrix& a, std::size_t s, std::uint64_t cap) {
  const std::size_t n = a.cols();
  if (s > n) {
    throw Error(ErrorKind::InvalidArgument, "nsp_check: order exceeds columns");
  }
  const std::uint64_t patterns = s >= 63 ? std::numeric_limits<std::uint64_t>::max()
                                         : (std::uint64_t{1} << s);
  check_cap(saturating_mul(binomial(n, s), patterns), cap, "nsp_check");

  NspReport report;
  report.order = s;
  const linalg::OrthogonalSplit split = linalg::orthogonal_split(a);
  if (s == 0 || split.rank == n) return report;  // vacuous

  // v = v+ - v-, constraints C^T v = 0 and sum(v+ + v-) + t = 1.
  const DenseMatrix& c = split.row_space;
  const std::size_t m = split.rank + 1;
  lp::StandardFormLp problem;
  problem.a = DenseMatrix(m, 2 * n + 1);
  problem.b.assign(m, 0.0);
  for (std::size_t i = 0; i < split.rank; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      problem.a(i, j) = c(j, i);
      problem.a(i, n + j) = -c(j, i);
    }
  for (std::size_t j = 0; j < 2 * n + 1; ++j) problem.a(m - 1, j) = 1.0;
  problem.b[m - 1] = 1.0;

  Support support = first_combination(s);
  bool first = true;
  Vector best_v;
  Support best_support;
  do {
    // sigma and -sigma give mirrored optima, so the first sign is fixed to +1.
    for (std::uint64_t pattern = 0; pattern < patterns / 2; ++pattern) {
      problem.c.assign(2 * n + 1, 0.0);
      for (std::size_t i = 0; i < s; ++i) {
        const double sigma = (i > 0 && ((pattern >> (i - 1)) & 1u)) ? -1.0 : 1.0;
        problem.c[support[i]] = -sigma;
        problem.c[n + support[i]] = sigma;
      }
      const lp::LpResult res = lp::solve_standard_form(problem);
      if (res.status != lp::LpStatus::Optimal) {
        throw Error(ErrorKind::NumericalBreakdown,
                    "nsp_check: bounded LP did not reach an optimum");
      }
      const double value = -res.objective;
      if (first || value > report.worst_ratio) {
        report.worst_ratio = value;
        best_v.resize(n);
        for (std::size_t j = 0; j < n; ++j) best_v[j] = res.x[j] - res.x[n + j];
        best_support = support;
        first = false;
      }
    }
  } while (next_combination(support, n));

  report.worst_ratio = std::clamp(report.worst_ratio, 0.0, 1.0);
  report.holds = report.worst_ratio < 0.5 - kStrictMargin;
  if (!report.holds) {
    report.witness_v = std::move(best_v);
    report.witness_support = std::move(best_support);
  }
  return report;
}

NspReport partial_nsp_check(const PartitionedMatrix& part, std::size_t s,
                            std::uint64_t cap) {
  if (part.r() > s) {
    throw Error(ErrorKind::InvalidArgument, "partial_nsp_check: need r <= s");
  }
  NspReport report = nsp_check(part.pa1(), s - part.r(), cap);
  report.property = "partial-nsp";
  return report;
}

bool recovery_guarantee(double delta_2s) {
  if (!(delta_2s >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "recovery_guarantee: delta < 0");
  }
  return delta_2s < std::sqrt(2.0) - 1.0;
}

DenseBlockConstants c1_c2(const PartitionedMatrix& part) {
  DenseBlockConstants out;
  if (part.sparse_cols() > 0) out.c1 = linalg::spectral_norm(part.a1());
  if (part.r() > 0) {
    const double sigma_min = linalg::smallest_singular_value(part.a2());
    if (!(sigma_min > 0.0)) {
      throw Error(ErrorKind::RankDeficient, "c1_c2: dense block is singular");
    }
    out.c2 = 1.0 / sigma_min;
  }
  return out;
}

ConstantBoundsReport check_c1_c2_bounds(const PartitionedMatrix& part,
                                        std::size_t s, std::uint64_t cap) {
  ConstantBoundsReport rep;
  rep.order = s;
  rep.delta_s = rip_constant(part.a(), s, cap).delta;
  const DenseBlockConstants consts = c1_c2(part);
  rep.c1 = consts.c1;
  rep.c2 = consts.c2;
  rep.c1_bound = std::sqrt(1.0 + rep.delta_s);
  rep.c2_bound = rep.delta_s < 1.0 ? 1.0 / std::sqrt(1.0 - rep.delta_s)
                                   : std::numeric_limits<double>::infinity();
  rep.c1_slack = rep.c1_bound - rep.c1;
  rep.c2_slack = rep.c2_bound - rep.c2;
  constexpr double kTol = 1e-9;
  rep.c2_checked = s >= part.r();
  rep.c2_holds = rep.c2 <= rep.c2_bound + kTol;
  rep.c1_order_sufficient = s >= part.sparse_cols();
  rep.c1_holds = rep.c1 <= rep.c1_bound + kTol;
  return rep;
}

double gaussian_sample_bound(std::size_t n, std::size_t s, std::size_t r,
                             double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::DomainError,
                "gaussian_sample_bound: delta must lie in (0, 1)");
  }
  if (r > s || s >= n) {
    throw Error(ErrorKind::InvalidArgument,
                "gaussian_sample_bound: need r <= s < N");
  }
  const double d = delta;
  const double lead = 96.0 / (3.0 * d * d - d * d * d);
  double sparse_term = 0.0;
  if (s > r) {
    const double t = static_cast<double>(s - r);
    sparse_term = t * std::log(static_cast<double>(n - r) * std::exp(1.0) / t);
  }
  return lead * (sparse_term + static_cast<double>(s) * std::log(12.0 / d));
}

double best_s_term_error(std::span<const double> x, std::size_t s) {
  if (s > x.size()) {
    throw Error(ErrorKind::InvalidArgument, "best_s_term_error: s > length");
  }
  Vector mags(x.size());
  std::transform(x.begin(), x.end(), mags.begin(),
                 [](double v) { return std::abs(v); });
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double tail = 0.0;
  for (std::size_t i = s; i < mags.size(); ++i) tail += mags[i];
  return tail;
}

SparsestSolution exhaustive_l0(const DenseMatrix& a, std::span<const double> y,
                               std::size_t s_max, std::uint64_t cap) {
  const std::size_t n = a.cols();
  if (y.size() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "exhaustive_l0: y length");
  }
  s_max = std::min(s_max, n);
  std::uint64_t total = 0;
  for (std::size_t t = 0; t <= s_max; ++t) {
    total = std::min(total + binomial(n, t), std::numeric_limits<std::uint64_t>::max() - 1);
  }
  check_cap(total, cap, "exhaustive_l0");

  const double accept = 1e-8 * (1.0 + linalg::norm2(y));
  SparsestSolution out;
  if (linalg::norm2(y) <= accept) {
    out.x.assign(n, 0.0);
    out.sparsity = 0;
    out.unique = true;
    return out;
  }
  for (std::size_t t = 1; t <= s_max; ++t) {
    std::size_t found = 0;
    Support support = first_combination(t);
    do {
      const DenseMatrix sub = a.select_columns(support);
      Vector coeff;
      try {
        coeff = linalg::least_squares_solve(sub, y);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::RankDeficient) continue;
        throw;
      }
      const double res =
          linalg::norm2(linalg::subtract(linalg::multiply(sub, coeff), y));
      if (res <= accept) {
        if (found == 0) {
          out.x.assign(n, 0.0);
          for (std::size_t i = 0; i < t; ++i) out.x[support[i]] = coeff[i];
        }
        ++found;
      }
    } while (next_combination(support, n));
    if (found > 0) {
      out.sparsity = t;
      out.unique = found == 1;
      return out;
    }
  }
  throw Error(ErrorKind::NoSolution,
              "exhaustive_l0: no consistent support of size <= " +
                  std::to_string(s_max));
}

std::uint64_t matrix_hash(const DenseMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const unsigned char* p, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t dims[2] = {m.rows(), m.cols()};
  mix(reinterpret_cast<const unsigned char*>(dims), sizeof(dims));
  for (double v : m.entries()) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    mix(bytes, sizeof(double));
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string certificate_json(const NspReport& report, std::uint64_t hash) {
  nlohmann::ordered_json j;
  j["property"] = report.property;
  j["order"] = report.order;
  j["holds"] = report.holds;
  j["worst_ratio"] = report.worst_ratio;
  j["witness_support"] = report.witness_support
                             ? nlohmann::ordered_json(*report.witness_support)
                             : nlohmann::ordered_json(nullptr);
  j["witness_vector"] = report.witness_v
                            ? nlohmann::ordered_json(*report.witness_v)
                            : nlohmann::ordered_json(nullptr);
  j["matrix_hash"] = hex64(hash);
  j["tolerances"] = {{"strict_margin", kStrictMargin},
                     {"nsp_threshold", 0.5}};
  return j.dump(2);
}

std::string certificate_json(const RipReport& report, std::uint64_t hash) {
  nlohmann::ordered_json j;
  j["property"] = report.property;
  j["order"] = report.order;
  j["delta"] = report.delta;
  j["worst_ratio"] = nullptr;
  j["witness_support"] = report.witness_support;
  j["witness_vector"] = nullptr;
  j["extreme_eigenvalue"] = report.extreme_eigenvalue;
  j["matrix_hash"] = hex64(hash);
  j["tolerances"] = {{"strict_margin", kStrictMargin},
                     {"eigen_offdiag_rel", 1e-12}};
  return j.dump(2);
}

}  // namespace pcs
