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

#ifndef PCS_EXPERIMENTS_HPP
#define PCS_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcs/partial.hpp"
#include "pcs/randgen.hpp"
#include "pcs/solvers.hpp"

namespace pcs {

struct ExperimentConfig {
  std::size_t n = 0;
  std::vector<std::size_t> r_values;
  std::vector<std::size_t> s_values;  // total sparsity s; x1 carries s - r
  std::vector<std::size_t> k_values;
  /// Noise levels. A config `eta = x` sets a single level.
  std::vector<double> eta_values{0.0};
  std::size_t trials_per_cell = 1;
  double success_threshold = 1e-4;
  Seed base_seed;
  SignalModel signal_model;
  /// Residual balancing is on by default here; fixed-penalty splitting stalls
  /// on many projected BPDN instances.
  SolveOptions solver_opts = [] {
    SolveOptions o;
    o.adaptive_penalty = true;
    return o;
  }();
  bool boundary_noise = true;
  /// Gate verify-bounds statistics on a partial NSP certificate per matrix.
  bool certify = false;
  /// Geometric decay ratios for the compressible-plant sweep (verify-bounds).
  std::vector<double> decay_values;
  double target_rate = 0.9;    // compare: success level
  double bound_delta = 0.5;    // compare: delta of the analytic bound
  std::size_t threads = 1;

  void validate() const;
};

/// Flat `key = value` text; lists are comma-separated, `#` starts a comment.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig read_config(const std::string& path);
/// Applies one key/value pair with the same grammar as the config file.
void apply_config_value(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

struct Cell {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t s = 0;
  std::size_t r = 0;
  double eta = 0.0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Stream index of a cell: a splitmix64 chain over (k, n, s, r) and the base
/// stream. eta is excluded so an eta sweep reuses matrix, plant and noise
/// direction.
std::uint64_t cell_stream(const Cell& cell, const Seed& base);
Seed trial_seed(const Cell& cell, const Seed& base, std::size_t trial);

struct TrialRecord {
  Cell cell;
  Seed seed;
  double err_x1 = 0.0;
  double err_x2 = 0.0;
  double x1_norm = 0.0;
  bool success = false;
  double c1 = 0.0;
  double c2 = 0.0;
  double bound_rhs_x2 = 0.0;  // C2 (2 eta + C1 err_x1)
  bool converged = false;
  bool bound_violated = false;
  std::size_t solver_iterations = 0;
  std::size_t redraws = 0;
  std::optional<bool> certified;
  /// sigma_{s-r}(x1)_1 / sqrt(s-r) of the plant (0 for exact plants).
  double compressibility = 0.0;
  double wall_time_ms = 0.0;
  std::string error;  // nonempty when the trial failed with an exception
};

/// Draw A, the plant and the noise for `cell`, form y = A x + e, recover by
/// the projected route and score it. Deterministic in (cfg, cell, seed)
/// except for wall_time_ms.
TrialRecord run_trial(const ExperimentConfig& cfg, const Cell& cell,
                      const Seed& seed);

struct CellSummary {
  Cell cell;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double rate = 0.0;
  double mean_err_x1 = 0.0;
  double mean_err_x2 = 0.0;
  std::size_t bound_violations = 0;
  std::size_t failures = 0;  // trials that raised
};

struct PhaseTable {
  std::vector<CellSummary> cells;  // sorted by (k, n, s, r, eta)
  std::vector<TrialRecord> records;

  std::string csv() const;
  std::string json(bool include_timing = false) const;
};

/// Valid cells of the grid (r <= s, s - r <= n - r, r <= k), sorted.
std::vector<Cell> grid_cells(const ExperimentConfig& cfg);

PhaseTable phase_diagram(const ExperimentConfig& cfg);

struct BoundCell {
  Cell cell;  // eta unused
  std::size_t trials = 0;
  std::size_t certified_trials = 0;
  std::size_t converged = 0;
  std::size_t x2_violations = 0;
  std::vector<double> etas;
  std::vector<double> mean_err_x1;  // per eta, over certified exact plants
  double max_err_at_zero = 0.0;
  double intercept = 0.0;  // least-squares err_x1 ~ intercept + slope * eta
  double slope = 0.0;      // fitted c
};

struct CompressibleRow {
  Cell cell;
  double decay = 0.0;
  std::size_t trials = 0;
  double mean_err_x1 = 0.0;
  double max_err_x1 = 0.0;
  double mean_tail = 0.0;  // sigma_{s-r}(x1)_1 / sqrt(s-r)
  double d_hat = 0.0;      // max over trials of err_x1 / tail
};

struct BoundReport {
  std::vector<BoundCell> cells;
  std::vector<CompressibleRow> compressible;
  std::vector<TrialRecord> records;
  /// c and d are never given in closed form; they are fitted here.
  std::string constants_treatment = "fitted";

  std::string csv() const;
  std::string json() const;
};

BoundReport verify_noisy_bounds(const ExperimentConfig& cfg);

struct ComparisonRow {
  std::size_t n = 0;
  std::size_t s = 0;
  std::size_t r = 0;
  double target_rate = 0.0;
  std::optional<std::size_t> min_k;  // first k on the grid reaching target
  std::optional<double> analytic_bound;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  PhaseTable phase;

  std::string csv() const;
};

ComparisonTable compare_full_vs_partial(const ExperimentConfig& cfg);

}  // namespace pcs

#endif  // PCS_EXPERIMENTS_HPP
