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

#include "doctest.h"
#include "json.hpp"
#include "pcs/error.hpp"
#include "pcs/experiments.hpp"

using namespace pcs;

namespace {

ExperimentConfig small_config() {
  return parse_config(
      "# small grid\n"
      "n = 16\n"
      "r_values = 0, 2\n"
      "s_values = 3\n"
      "k_values = 6:16:5\n"
      "trials_per_cell = 4\n"
      "seed = 0x51\n");
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = small_config();
  CHECK(cfg.n == 16);
  CHECK(cfg.r_values == std::vector<std::size_t>{0, 2});
  CHECK(cfg.k_values == std::vector<std::size_t>{6, 11, 16});
  CHECK(cfg.eta_values == std::vector<double>{0.0});
  CHECK(cfg.base_seed.base == 0x51);
  CHECK(cfg.success_threshold == 1e-4);

  auto c2 = cfg;
  apply_config_value(c2, "eta_values", "0, 0.01,0.1");
  CHECK(c2.eta_values.size() == 3);
  apply_config_value(c2, "eta", "0.5");
  CHECK(c2.eta_values == std::vector<double>{0.5});
  apply_config_value(c2, "signal", "unit");
  CHECK(c2.signal_model.magnitude == SignalModel::Magnitude::UnitMagnitudeRandomSign);

  CHECK_THROWS_AS(parse_config("bogus = 1\n"), Error);
  CHECK_THROWS_AS(parse_config("n 5\n"), Error);
  CHECK_THROWS_AS(parse_config("n = -3\n"), Error);
  CHECK_THROWS_AS(parse_config("k_values = 5:2\n"), Error);
  ExperimentConfig empty;
  CHECK_THROWS_AS(empty.validate(), Error);
  auto bad = cfg;
  bad.trials_per_cell = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("cell seeds ignore eta") {
  const Seed base{7, 0};
  const Cell a{10, 20, 3, 1, 0.0};
  Cell b = a;
  b.eta = 0.1;
  CHECK(cell_stream(a, base) == cell_stream(b, base));
  Cell c = a;
  c.k = 11;
  CHECK(cell_stream(a, base) != cell_stream(c, base));
  CHECK_FALSE(trial_seed(a, base, 0) == trial_seed(a, base, 1));
}

TEST_CASE("square systems are recovered exactly") {
  ExperimentConfig cfg = small_config();
  for (std::uint64_t t = 0; t < 5; ++t) {
    const Cell cell{12, 12, 4, 2, 0.0};
    const auto rec = run_trial(cfg, cell, Seed{9, t});
    CHECK(rec.error.empty());
    CHECK(rec.err_x1 <= 1e-8);
    CHECK(rec.err_x2 <= 1e-8);
    CHECK(rec.success);
  }
}

TEST_CASE("noisy trials satisfy the x2 bound") {
  ExperimentConfig cfg = small_config();
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto rec = run_trial(cfg, Cell{10, 16, 4, 2, 0.01}, Seed{10, t});
    REQUIRE(rec.error.empty());
    if (rec.converged) CHECK(rec.err_x2 <= rec.bound_rhs_x2 + 1e-8);
    CHECK_FALSE(rec.bound_violated);
  }
}

TEST_CASE("phase diagram layout and determinism") {
  auto cfg = small_config();
  const auto t1 = phase_diagram(cfg);
  CHECK(t1.cells.size() == 6);
  const std::string csv = t1.csv();
  CHECK(csv.rfind(
            "k,n,s,r,eta,trials,successes,rate,mean_err_x1,mean_err_x2,bound_violations\n",
            0) == 0);
  cfg.threads = 4;
  const auto t2 = phase_diagram(cfg);
  CHECK(t2.csv() == csv);
  CHECK(t2.json() == t1.json());
  // k = N is a determined system.
  for (const auto& c : t1.cells) {
    if (c.cell.k == 16) CHECK(c.rate == 1.0);
    CHECK(c.failures == 0);
  }
  const auto doc = nlohmann::json::parse(t1.json(true));
  CHECK(doc["records"].size() == 24);
  CHECK(doc["records"][0].contains("wall_time_ms"));
  CHECK_FALSE(nlohmann::json::parse(t1.json())["records"][0].contains("wall_time_ms"));
}

TEST_CASE("invalid cells are skipped") {
  auto cfg = small_config();
  cfg.r_values = {0, 5};
  cfg.k_values = {4};
  const auto cells = grid_cells(cfg);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].r == 0);
}

TEST_CASE("verify bounds needs an eta sweep") {
  auto cfg = small_config();
  CHECK_THROWS_AS(verify_noisy_bounds(cfg), Error);
  cfg.eta_values = {0.0, 0.01, 0.1};
  cfg.k_values = {12};
  cfg.r_values = {2};
  cfg.s_values = {4};
  cfg.decay_values = {0.3, 0.7};
  const auto rep = verify_noisy_bounds(cfg);
  REQUIRE(rep.cells.size() == 1);
  const auto& c = rep.cells[0];
  CHECK(c.x2_violations == 0);
  CHECK(c.slope >= 0.0);
  CHECK(rep.constants_treatment == "fitted");
  REQUIRE(rep.compressible.size() == 2);
  for (const auto& row : rep.compressible) {
    CHECK(row.max_err_x1 <= row.d_hat * row.mean_tail * 1e6);  // d_hat is finite
  }
  // Sharper decay leaves less tail to miss.
  CHECK(rep.compressible[0].mean_tail < rep.compressible[1].mean_tail);
  CHECK(rep.compressible[0].mean_err_x1 < rep.compressible[1].mean_err_x1);
  const auto doc = nlohmann::json::parse(rep.json());
  CHECK(doc["constants_treatment"] == "fitted");
}

TEST_CASE("comparison table") {
  auto cfg = small_config();
  CHECK_THROWS_AS(compare_full_vs_partial([] {
                    auto c = small_config();
                    c.r_values = {2};
                    return c;
                  }()),
                  Error);
  cfg.r_values = {0, 3};
  cfg.s_values = {3};
  cfg.k_values = {3, 4, 8, 12, 16};
  const auto table = compare_full_vs_partial(cfg);
  REQUIRE(table.rows.size() == 2);
  // r = s: only the dense block is unknown, so k = r suffices.
  const auto& dense_only = table.rows[1];
  CHECK(dense_only.r == 3);
  REQUIRE(dense_only.min_k);
  CHECK(*dense_only.min_k == 3);
  REQUIRE(table.rows[0].analytic_bound);
  CHECK(table.csv().rfind("n,s,r,target_rate,min_k,analytic_bound\n", 0) == 0);
}
