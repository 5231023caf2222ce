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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failing criteria (0 when all pass). An optional argument names a
// directory that receives the CSV artifacts.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "pcs/certificates.hpp"
#include "pcs/error.hpp"
#include "pcs/experiments.hpp"
#include "pcs/partial.hpp"
#include "pcs/randgen.hpp"
#include "pcs/solvers.hpp"
#include "test_support.hpp"

using namespace pcs;
using pcs::testing::max_abs_diff;

namespace {

// Pinned tolerances.
constexpr double kObjectiveRelTol = 1e-5;   // criterion 1
constexpr double kExactTol = 1e-6;          // criteria 2, 3
constexpr double kChainTol = 1e-9;          // criterion 4
constexpr double kRipOracleTol = 1e-10;     // criterion 5
constexpr double kBoundSlack = 1e-8;        // criterion 6
constexpr double kInterceptTol = 1e-4;      // criterion 7
constexpr double kBoundValueTol = 0.1;      // criterion 8
constexpr double kRederivedBound = 3301.699482275;

std::filesystem::path g_artifacts;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::size_t worker_count() {
  return std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
}

void save_artifact(const std::string& name, const std::string& text) {
  if (g_artifacts.empty()) return;
  std::filesystem::create_directories(g_artifacts);
  std::ofstream(g_artifacts / name, std::ios::binary) << text;
}

std::string fnv_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// 1. Splitting objective matches simplex on 200 equality instances.
Outcome solver_exactness() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t mismatches = 0;
  std::size_t not_converged = 0;
  SolveOptions opts;
  opts.abs_tol = 1e-10;
  opts.rel_tol = 1e-10;
  opts.max_iters = 200000;
  opts.adaptive_penalty = true;
  pcs::testing::for_all(0xA1, 200, [&](const Seed& seed, std::size_t) {
    Rng rng(seed);
    const std::size_t k = 2 + rng.uniform_index(11);       // 2..12
    const std::size_t n = k + 1 + rng.uniform_index(24 - k);  // k+1..24
    const std::size_t s = 1 + rng.uniform_index(std::max<std::size_t>(1, k / 2));
    const DenseMatrix a = gaussian_matrix(k, n, seed.derive(0));
    const Vector x = planted_signal(n, s, 0, SignalModel{}, seed.derive(1)).x1;
    const Vector y = linalg::multiply(a, x);
    const SolveReport lp = simplex_l1(a, y, Vector(n, 1.0));
    const SolveReport admm = admm_basis_pursuit(a, y, opts);
    if (admm.status != SolveStatus::Converged) ++not_converged;
    const double rel = std::abs(admm.objective - lp.objective) /
                       std::max(lp.objective, 1e-300);
    worst = std::max(worst, rel);
    if (rel > kObjectiveRelTol) ++mismatches;
  });
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  std::ostringstream os;
  os << "200 instances, max relative objective gap " << worst << " (tol "
     << kObjectiveRelTol << "), " << not_converged << " hit the iteration cap, "
     << secs << " s (limit 60 s)";
  return {mismatches == 0 && secs < 60.0, os.str()};
}

// Draws 10x14, r = 2 matrices in a fixed sequence and splits them by the
// partial NSP verdict at s - r = 2.
struct CertifiedDraws {
  std::vector<PartitionedMatrix> passing;
  std::vector<std::pair<PartitionedMatrix, NspReport>> failing;
  std::size_t examined = 0;
};

const CertifiedDraws& certified_draws() {
  static const CertifiedDraws draws = [] {
    CertifiedDraws d;
    for (std::uint64_t t = 0; d.passing.size() < 50 && t < 20000; ++t) {
      PartitionedMatrix part(gaussian_matrix(10, 14, Seed{0xA2, t}), 2);
      ++d.examined;
      NspReport rep = partial_nsp_check(part, 4);
      if (rep.holds) {
        d.passing.push_back(std::move(part));
      } else {
        d.failing.emplace_back(std::move(part), std::move(rep));
      }
    }
    return d;
  }();
  return draws;
}

// 2. Certified matrices recover every support/sign plant exactly.
Outcome forward_direction() {
  const CertifiedDraws& d = certified_draws();
  std::size_t plants = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  for (std::size_t m = 0; m < d.passing.size(); ++m) {
    const PartitionedMatrix& part = d.passing[m];
    Rng rng(Seed{0xA2B, m});
    Support supp{0, 1};
    do {
      for (int signs = 0; signs < 4; ++signs) {
        PartiallySparseSignal sig;
        sig.x1.assign(12, 0.0);
        for (std::size_t i = 0; i < 2; ++i) {
          const double mag = 0.5 + 1.5 * rng.uniform();
          sig.x1[supp[i]] = ((signs >> i) & 1) ? -mag : mag;
        }
        sig.x2 = {rng.normal(), rng.normal()};
        const Vector y = linalg::multiply(part.a(), sig.joined());
        const PartialSolution sol = recover_projected(part, y, 0.0);
        const double err = std::max(max_abs_diff(sol.x1, sig.x1),
                                    max_abs_diff(sol.x2, sig.x2));
        worst = std::max(worst, err);
        if (err > kExactTol) ++failures;
        ++plants;
      }
    } while (next_combination(supp, 12));
  }
  std::ostringstream os;
  os << d.passing.size() << " certified matrices (of " << d.examined
     << " drawn), " << plants << " plants, " << failures
     << " failures, max error " << worst << " (tol " << kExactTol << ")";
  return {d.passing.size() == 50 && plants == 50 * 66 * 4 && failures == 0, os.str()};
}

// Builds the instance x1 = (v)_S from a failing certificate and checks that
// the l1 problem does not single out the plant.
bool witness_not_unique(const PartitionedMatrix& part, const NspReport& rep) {
  if (!rep.witness_v || !rep.witness_support) return false;
  const Vector& v = *rep.witness_v;
  Vector plant(v.size(), 0.0);
  Vector alt = linalg::scale(v, -1.0);
  for (std::size_t j : *rep.witness_support) {
    plant[j] = v[j];
    alt[j] = 0.0;
  }
  PartiallySparseSignal sig{plant, Vector(part.r(), 1.0), 0, true};
  const Vector y = linalg::multiply(part.a(), sig.joined());
  const PartialSolution sol = recover_projected(part, y, 0.0);
  if (max_abs_diff(sol.x1, plant) > kExactTol) return true;
  // The simplex returned the plant: the alternative -v_{S^c} must be an
  // equally good (or better) feasible point.
  const Vector gap = linalg::multiply(part.pa1(), linalg::subtract(alt, plant));
  const bool feasible = linalg::norm_inf(gap) <= 1e-9 * (1.0 + linalg::norm_inf(y));
  const bool distinct = max_abs_diff(alt, plant) > kExactTol;
  return feasible && distinct && linalg::norm1(alt) <= linalg::norm1(plant) + 1e-9;
}

// 3. Failing certificates yield non-unique witness instances.
Outcome reverse_direction() {
  const CertifiedDraws& d = certified_draws();
  std::size_t unique = 0;
  for (const auto& [part, rep] : d.failing)
    if (!witness_not_unique(part, rep)) ++unique;

  // Constructed failures: repeated sparse columns and a 1x2 kernel.
  std::size_t constructed = 0;
  std::size_t constructed_ok = 0;
  DenseMatrix rep_cols = gaussian_matrix(10, 14, Seed{0xA3, 0});
  for (std::size_t i = 0; i < 10; ++i) rep_cols(i, 1) = rep_cols(i, 0);
  const PartitionedMatrix pr(rep_cols, 2);
  const NspReport rr = partial_nsp_check(pr, 4);
  ++constructed;
  if (!rr.holds && witness_not_unique(pr, rr)) ++constructed_ok;
  const PartitionedMatrix tiny(DenseMatrix::from_rows({{1, -1}}), 0);
  const NspReport tr = partial_nsp_check(tiny, 1);
  ++constructed;
  if (!tr.holds && witness_not_unique(tiny, tr)) ++constructed_ok;

  std::ostringstream os;
  os << d.failing.size() << " failing certificates, " << unique
     << " witness instances recovered uniquely; constructed failures "
     << constructed_ok << "/" << constructed;
  return {!d.failing.empty() && unique == 0 && constructed_ok == constructed, os.str()};
}

// 4. NSP(s) => partial NSP(s-r) and the RIP sandwich, on 100 matrices.
Outcome chains() {
  std::size_t nsp_cases = 0;
  std::size_t violations = 0;
  std::size_t rip_cases = 0;
  double worst_gap = -INFINITY;
  pcs::testing::for_all(0xA4, 100, [&](const Seed& seed, std::size_t i) {
    Rng rng(seed);
    const std::size_t k = 5 + rng.uniform_index(4);  // 5..8
    const std::size_t n = k + 2 + rng.uniform_index(3);
    const std::size_t s = 2 + (i % 2);
    const DenseMatrix a = gaussian_matrix(k, n, seed.derive(0));
    const bool full = nsp_check(a, s).holds;
    const double da = rip_constant(a, s).delta;
    for (std::size_t r = 0; r <= s; ++r) {
      const PartitionedMatrix part(a, r);
      if (full) {
        ++nsp_cases;
        if (!partial_nsp_check(part, s).holds) ++violations;
      }
      const double dp = partial_rip_constant(part, s).delta;
      const double dm = mixed_rip_constant(part, s).delta;
      ++rip_cases;
      worst_gap = std::max({worst_gap, dp - dm, dm - da});
      if (dp > dm + kChainTol || dm > da + kChainTol) ++violations;
    }
  });
  std::ostringstream os;
  os << nsp_cases << " NSP implications and " << rip_cases
     << " RIP sandwiches checked, " << violations
     << " violations, largest chain excess " << worst_gap << " (tol " << kChainTol << ")";
  return {violations == 0 && nsp_cases > 0, os.str()};
}

// 5. Exhaustive RIP at order 2 against the closed-form pairwise oracle.
Outcome rip_oracle() {
  double worst = 0.0;
  pcs::testing::for_all(0xA5, 50, [&](const Seed& seed, std::size_t) {
    const DenseMatrix a = gaussian_matrix(8, 16, seed);
    worst = std::max(worst, std::abs(rip_constant(a, 2).delta -
                                     pcs::testing::pairwise_rip2(a)));
  });
  std::ostringstream os;
  os << "50 matrices 8x16, max |delta - oracle| " << worst << " (tol " << kRipOracleTol
     << ")";
  return {worst <= kRipOracleTol, os.str()};
}

// 6. Per-trial x2 bound over the noisy grid.
Outcome x2_bound() {
  std::size_t converged = 0;
  std::size_t total = 0;
  std::size_t violations = 0;
  std::size_t errors = 0;
  std::string csv;
  for (std::size_t r : {0, 2, 5}) {
    ExperimentConfig cfg;
    cfg.n = 40;
    cfg.k_values = {20};
    cfg.r_values = {r};
    cfg.s_values = {r + 3};
    cfg.eta_values = {0.001, 0.01, 0.1};
    cfg.trials_per_cell = 50;
    cfg.base_seed = Seed{0xA6, 0};
    cfg.threads = worker_count();
    const PhaseTable table = phase_diagram(cfg);
    for (const TrialRecord& rec : table.records) {
      ++total;
      if (!rec.error.empty()) {
        ++errors;
        continue;
      }
      if (!rec.converged) continue;
      ++converged;
      if (rec.err_x2 > rec.bound_rhs_x2 + kBoundSlack) ++violations;
    }
    csv += table.csv();
  }
  save_artifact("x2_bound.csv", csv);
  std::ostringstream os;
  os << total << " trials, " << converged << " converged, " << violations
     << " violations, " << errors << " errors (slack " << kBoundSlack << ")";
  return {violations == 0 && errors == 0 && converged > 0, os.str()};
}

ExperimentConfig scaling_config() {
  ExperimentConfig cfg;
  cfg.n = 14;
  cfg.k_values = {10, 12};
  cfg.r_values = {2};
  cfg.s_values = {4};
  cfg.eta_values = {0.0, 0.001, 0.01, 0.05};
  cfg.trials_per_cell = 150;
  cfg.certify = true;
  cfg.base_seed = Seed{0xA7, 0};
  cfg.solver_opts.abs_tol = 1e-10;
  cfg.solver_opts.rel_tol = 1e-9;
  cfg.solver_opts.max_iters = 100000;
  cfg.threads = worker_count();
  return cfg;
}

// 7. Noisy scaling on certified cells.
Outcome noisy_scaling() {
  const BoundReport rep = verify_noisy_bounds(scaling_config());
  save_artifact("noisy_scaling.csv", rep.csv());
  bool ok = true;
  std::ostringstream os;
  for (const BoundCell& c : rep.cells) {
    const bool fitted = std::isfinite(c.intercept);
    bool monotone = true;
    for (std::size_t e = 1; e < c.mean_err_x1.size(); ++e)
      if (c.mean_err_x1[e] + 1e-12 < c.mean_err_x1[e - 1]) monotone = false;
    const bool cell_ok = fitted && c.certified_trials > 0 &&
                         std::abs(c.intercept) <= kInterceptTol &&
                         c.max_err_at_zero <= kExactTol && c.slope >= 0.0 && monotone &&
                         c.x2_violations == 0;
    ok = ok && cell_ok;
    os << "k=" << c.cell.k << ": " << c.certified_trials << " certified, intercept "
       << c.intercept << ", slope " << c.slope << ", max err at eta=0 "
       << c.max_err_at_zero << (monotone ? ", monotone" : ", NOT monotone") << "; ";
  }
  os << "tol intercept " << kInterceptTol;
  return {ok && !rep.cells.empty(), os.str()};
}

ExperimentConfig savings_config() {
  ExperimentConfig cfg;
  cfg.n = 200;
  cfg.s_values = {10};
  cfg.r_values = {0, 9};
  cfg.k_values = {10, 15, 20, 25, 30, 35, 40, 50, 60, 70};
  cfg.trials_per_cell = 20;
  cfg.target_rate = 0.9;
  cfg.base_seed = Seed{0xA8, 0};
  cfg.threads = worker_count();
  return cfg;
}

// 8. Measurement savings at N = 200, s = 10, plus the analytic bound value.
Outcome savings() {
  const ComparisonTable table = compare_full_vs_partial(savings_config());
  save_artifact("savings.csv", table.csv());
  save_artifact("savings_phase.csv", table.phase.csv());
  std::optional<std::size_t> full, partial;
  for (const ComparisonRow& row : table.rows) {
    if (row.r == 0) full = row.min_k;
    if (row.r == 9) partial = row.min_k;
  }
  const double bound = gaussian_sample_bound(104, 5, 4, 0.5);
  std::ostringstream os;
  os << "min k at 90%: r=0 -> " << (full ? std::to_string(*full) : "none") << ", r=9 -> "
     << (partial ? std::to_string(*partial) : "none") << "; bound(104,5,4,0.5) = "
     << bound << " (re-derived " << kRederivedBound << ", tol " << kBoundValueTol << ")";
  const bool ordered = full && partial && *partial < *full;
  return {ordered && std::abs(bound - kRederivedBound) <= kBoundValueTol, os.str()};
}

// 9. Identical configs give identical CSV, regardless of thread count.
Outcome determinism() {
  ExperimentConfig cfg;
  cfg.n = 24;
  cfg.s_values = {3, 5};
  cfg.r_values = {0, 2};
  cfg.k_values = {8, 12, 16};
  cfg.eta_values = {0.0, 0.01};
  cfg.trials_per_cell = 6;
  cfg.base_seed = Seed{0xA9, 0};
  cfg.threads = 1;
  const std::string a = phase_diagram(cfg).csv();
  cfg.threads = worker_count();
  const std::string b = phase_diagram(cfg).csv();
  cfg.eta_values = {0.0, 0.01, 0.1};
  cfg.k_values = {12};
  const std::string c = verify_noisy_bounds(cfg).csv();
  const std::string d = verify_noisy_bounds(cfg).csv();
  save_artifact("determinism_phase.csv", a);
  save_artifact("determinism_bounds.csv", c);
  std::ostringstream os;
  os << "phase csv fnv " << fnv_hex(a) << " vs " << fnv_hex(b) << "; bounds csv fnv "
     << fnv_hex(c) << " vs " << fnv_hex(d);
  return {a == b && c == d, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_artifacts = argv[1];
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "solver exactness", solver_exactness},
      {2, "certified instances recover exactly", forward_direction},
      {3, "failing certificates give non-unique instances", reverse_direction},
      {4, "NSP and RIP chains", chains},
      {5, "exhaustive RIP vs pairwise oracle", rip_oracle},
      {6, "x2 noise bound per trial", x2_bound},
      {7, "noisy scaling on certified cells", noisy_scaling},
      {8, "measurement savings", savings},
      {9, "determinism", determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    std::printf("[%s] criterion %d: %s -- %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", c.id,
                c.name, out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed;
}
