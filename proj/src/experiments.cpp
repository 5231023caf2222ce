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

#include "pcs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "pcs/certificates.hpp"
#include "pcs/error.hpp"
#include "pcs/matrix_io.hpp"

namespace pcs {
namespace {

// Sub-stream tags of one trial.
constexpr std::uint64_t kMatrixTag = 0;
constexpr std::uint64_t kSignalTag = 1;
constexpr std::uint64_t kNoiseTag = 2;
constexpr std::uint64_t kRedrawTagBase = 1000;
constexpr std::size_t kMaxRedraws = 16;

constexpr double kBoundSlack = 1e-8;

auto cell_key(const Cell& c) { return std::tuple(c.k, c.n, c.s, c.r, c.eta); }

struct Instance {
  std::optional<PartitionedMatrix> part;
  PartiallySparseSignal plant;
  DenseBlockConstants consts;
  Seed noise_seed;
  std::size_t redraws = 0;
};

Instance draw_instance(const Cell& cell, const Seed& seed,
                       const SignalModel& model) {
  Instance inst;
  for (std::size_t attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    const Seed mseed =
        attempt == 0 ? seed.derive(kMatrixTag) : seed.derive(kRedrawTagBase + attempt);
    try {
      inst.part.emplace(gaussian_matrix(cell.k, cell.n, mseed), cell.r);
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RankDeficient || attempt == kMaxRedraws) throw;
      ++inst.redraws;
      std::clog << "pcs: rank-deficient dense block for cell (k=" << cell.k
                << ", n=" << cell.n << ", s=" << cell.s << ", r=" << cell.r
                << ") seed " << format_seed(seed) << "; redrawing\n";
    }
  }
  const std::size_t n1 = cell.n - cell.r;
  const std::size_t sparsity =
      model.magnitude == SignalModel::Magnitude::GeometricDecay ? n1 : cell.s - cell.r;
  inst.plant = planted_signal(n1, sparsity, cell.r, model, seed.derive(kSignalTag));
  inst.consts = c1_c2(*inst.part);
  inst.noise_seed = seed.derive(kNoiseTag);
  return inst;
}

TrialRecord evaluate(const ExperimentConfig& cfg, const Instance& inst,
                     const Cell& cell, const Seed& seed) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.cell = cell;
  rec.seed = seed;
  rec.redraws = inst.redraws;
  rec.c1 = inst.consts.c1;
  rec.c2 = inst.consts.c2;
  rec.x1_norm = linalg::norm2(inst.plant.x1);
  if (!inst.plant.exactly_sparse && cell.s > cell.r) {
    rec.compressibility = best_s_term_error(inst.plant.x1, cell.s - cell.r) /
                          std::sqrt(static_cast<double>(cell.s - cell.r));
  }
  try {
    const PartitionedMatrix& part = *inst.part;
    const Vector noise =
        noise_on_ball(cell.k, cell.eta, inst.noise_seed, cfg.boundary_noise);
    const Vector y = linalg::add(linalg::multiply(part.a(), inst.plant.joined()), noise);
    RecoverOptions opts;
    opts.solver = cfg.solver_opts;
    opts.method = Method::Simplex;
    const PartialSolution sol = recover_projected(part, y, cell.eta, opts);
    rec.err_x1 = linalg::norm2(linalg::subtract(sol.x1, inst.plant.x1));
    rec.err_x2 = cell.r == 0 ? 0.0
                             : linalg::norm2(linalg::subtract(sol.x2, inst.plant.x2));
    rec.converged = sol.x1_report.status == SolveStatus::Converged;
    rec.solver_iterations = sol.x1_report.iterations;
    rec.success = rec.err_x1 <= cfg.success_threshold * (1.0 + rec.x1_norm);
    rec.bound_rhs_x2 = rec.c2 * (2.0 * cell.eta + rec.c1 * rec.err_x1);
    rec.bound_violated = cell.eta > 0.0 && rec.converged &&
                         rec.err_x2 > rec.bound_rhs_x2 + kBoundSlack;
  } catch (const Error& e) {
    rec.error = std::string(to_string(e.kind())) + ": " + e.what();
    rec.success = false;
  }
  rec.wall_time_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return rec;
}

// Runs fn(i) for i in [0, count) on `threads` workers; each index is written
// by exactly one worker, so results stored by index are order-independent.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorKind::ParseError, "config: " + msg);
}

std::size_t to_size(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size() || x < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
    config_error(key + ": expected a nonnegative integer, got '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    config_error(key + ": expected a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  config_error(key + ": expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const std::string item =
        trim(v.substr(start, comma == std::string::npos ? std::string::npos
                                                        : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Integers or inclusive ranges lo:hi[:step].
std::vector<std::size_t> to_size_list(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  for (const std::string& item : split_list(v)) {
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(to_size(key, item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    const std::size_t lo = to_size(key, trim(item.substr(0, c1)));
    const std::size_t hi = to_size(
        key, trim(item.substr(c1 + 1, c2 == std::string::npos ? std::string::npos
                                                              : c2 - c1 - 1)));
    const std::size_t step =
        c2 == std::string::npos ? 1 : to_size(key, trim(item.substr(c2 + 1)));
    if (step == 0 || hi < lo) config_error(key + ": bad range '" + item + "'");
    for (std::size_t x = lo; x <= hi; x += step) out.push_back(x);
  }
  return out;
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const std::string& item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  return io::format_double(x);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return {{"k", c.k}, {"n", c.n}, {"s", c.s}, {"r", c.r}, {"eta", c.eta}};
}

nlohmann::ordered_json record_json(const TrialRecord& r, bool timing) {
  nlohmann::ordered_json j;
  j["cell"] = cell_json(r.cell);
  j["seed"] = {{"base", r.seed.base}, {"stream", r.seed.stream}};
  j["err_x1"] = r.err_x1;
  j["err_x2"] = r.err_x2;
  j["success"] = r.success;
  j["c1"] = r.c1;
  j["c2"] = r.c2;
  j["bound_rhs_x2"] = r.bound_rhs_x2;
  j["converged"] = r.converged;
  j["bound_violated"] = r.bound_violated;
  j["solver_iterations"] = r.solver_iterations;
  j["redraws"] = r.redraws;
  j["certified"] = r.certified ? nlohmann::ordered_json(*r.certified)
                               : nlohmann::ordered_json(nullptr);
  if (r.compressibility > 0.0) j["compressibility"] = r.compressibility;
  if (timing) j["wall_time_ms"] = r.wall_time_ms;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& m) {
    throw Error(ErrorKind::InvalidArgument, "config: " + m);
  };
  if (n == 0) fail("n must be >= 1");
  if (r_values.empty() || s_values.empty() || k_values.empty() ||
      eta_values.empty()) {
    fail("r_values, s_values, k_values and eta values must be nonempty");
  }
  if (trials_per_cell < 1) fail("trials_per_cell must be >= 1");
  if (!(success_threshold > 0.0)) fail("success_threshold must be > 0");
  for (double e : eta_values)
    if (!(e >= 0.0)) fail("eta values must be >= 0");
  for (std::size_t k : k_values)
    if (k == 0) fail("k values must be >= 1");
  for (double d : decay_values)
    if (!(d > 0.0 && d <= 1.0)) fail("decay values must lie in (0, 1]");
  if (!(target_rate > 0.0 && target_rate <= 1.0)) fail("target_rate in (0, 1]");
  signal_model.validate();
  solver_opts.validate(0);
}

void apply_config_value(ExperimentConfig& cfg, const std::string& key_in,
                        const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string v = trim(value_in);
  if (key == "n") cfg.n = to_size(key, v);
  else if (key == "r" || key == "r_values") cfg.r_values = to_size_list(key, v);
  else if (key == "s" || key == "s_values") cfg.s_values = to_size_list(key, v);
  else if (key == "k" || key == "k_values") cfg.k_values = to_size_list(key, v);
  else if (key == "eta") cfg.eta_values = {to_double(key, v)};
  else if (key == "eta_values") cfg.eta_values = to_double_list(key, v);
  else if (key == "trials" || key == "trials_per_cell") cfg.trials_per_cell = to_size(key, v);
  else if (key == "success_threshold") cfg.success_threshold = to_double(key, v);
  else if (key == "seed" || key == "base_seed") cfg.base_seed.base = parse_seed_value(v);
  else if (key == "seed_stream") cfg.base_seed.stream = parse_seed_value(v);
  else if (key == "signal") {
    using M = SignalModel::Magnitude;
    if (v == "uniform") cfg.signal_model.magnitude = M::UniformInRange;
    else if (v == "unit") cfg.signal_model.magnitude = M::UnitMagnitudeRandomSign;
    else if (v == "geometric") cfg.signal_model.magnitude = M::GeometricDecay;
    else config_error("signal: expected uniform|unit|geometric");
  }
  else if (key == "lo") cfg.signal_model.lo = to_double(key, v);
  else if (key == "hi") cfg.signal_model.hi = to_double(key, v);
  else if (key == "decay") cfg.signal_model.decay = to_double(key, v);
  else if (key == "decay_values") cfg.decay_values = to_double_list(key, v);
  else if (key == "max_iters") cfg.solver_opts.max_iters = to_size(key, v);
  else if (key == "abs_tol") cfg.solver_opts.abs_tol = to_double(key, v);
  else if (key == "rel_tol") cfg.solver_opts.rel_tol = to_double(key, v);
  else if (key == "penalty") cfg.solver_opts.penalty = to_double(key, v);
  else if (key == "adaptive_penalty") cfg.solver_opts.adaptive_penalty = to_bool(key, v);
  else if (key == "boundary_noise") cfg.boundary_noise = to_bool(key, v);
  else if (key == "certify") cfg.certify = to_bool(key, v);
  else if (key == "target_rate") cfg.target_rate = to_double(key, v);
  else if (key == "delta" || key == "bound_delta") cfg.bound_delta = to_double(key, v);
  else if (key == "threads") cfg.threads = std::max<std::size_t>(1, to_size(key, v));
  else config_error("unknown key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      config_error("line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::uint64_t cell_stream(const Cell& cell, const Seed& base) {
  std::uint64_t h = splitmix64(base.stream);
  for (std::uint64_t v : {std::uint64_t{cell.k}, std::uint64_t{cell.n},
                          std::uint64_t{cell.s}, std::uint64_t{cell.r}}) {
    h = splitmix64(h ^ v);
  }
  return h;
}

Seed trial_seed(const Cell& cell, const Seed& base, std::size_t trial) {
  return Seed{base.base, cell_stream(cell, base)}.derive(trial);
}

TrialRecord run_trial(const ExperimentConfig& cfg, const Cell& cell,
                      const Seed& seed) {
  if (cell.r > cell.s || cell.s > cell.n || cell.r > cell.k || cell.k == 0) {
    throw Error(ErrorKind::InvalidArgument,
                "run_trial: need r <= s <= n and r <= k");
  }
  Instance inst = draw_instance(cell, seed, cfg.signal_model);
  std::optional<bool> certified;
  if (cfg.certify) certified = partial_nsp_check(*inst.part, cell.s).holds;
  TrialRecord rec = evaluate(cfg, inst, cell, seed);
  rec.certified = certified;
  return rec;
}

std::vector<Cell> grid_cells(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  for (std::size_t k : cfg.k_values)
    for (std::size_t s : cfg.s_values)
      for (std::size_t r : cfg.r_values)
        for (double eta : cfg.eta_values) {
          if (r > s || s > cfg.n || r > k) continue;
          cells.push_back(Cell{k, cfg.n, s, r, eta});
        }
  std::sort(cells.begin(), cells.end(),
            [](const Cell& a, const Cell& b) { return cell_key(a) < cell_key(b); });
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

PhaseTable phase_diagram(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<Cell> cells = grid_cells(cfg);
  const std::size_t trials = cfg.trials_per_cell;
  PhaseTable table;
  table.records.resize(cells.size() * trials);
  parallel_for(table.records.size(), cfg.threads, [&](std::size_t job) {
    const Cell& cell = cells[job / trials];
    const Seed seed = trial_seed(cell, cfg.base_seed, job % trials);
    try {
      table.records[job] = run_trial(cfg, cell, seed);
    } catch (const Error& e) {
      TrialRecord rec;
      rec.cell = cell;
      rec.seed = seed;
      rec.error = std::string(to_string(e.kind())) + ": " + e.what();
      table.records[job] = rec;
    }
  });

  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellSummary sum;
    sum.cell = cells[c];
    sum.trials = trials;
    std::size_t ok = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const TrialRecord& rec = table.records[c * trials + t];
      if (!rec.error.empty()) {
        ++sum.failures;
        continue;
      }
      ++ok;
      if (rec.success) ++sum.successes;
      if (rec.bound_violated) ++sum.bound_violations;
      sum.mean_err_x1 += rec.err_x1;
      sum.mean_err_x2 += rec.err_x2;
    }
    if (ok > 0) {
      sum.mean_err_x1 /= static_cast<double>(ok);
      sum.mean_err_x2 /= static_cast<double>(ok);
    }
    sum.rate = static_cast<double>(sum.successes) / static_cast<double>(trials);
    table.cells.push_back(sum);
  }
  return table;
}

std::string PhaseTable::csv() const {
  std::string out =
      "k,n,s,r,eta,trials,successes,rate,mean_err_x1,mean_err_x2,bound_violations\n";
  for (const CellSummary& c : cells) {
    out += std::to_string(c.cell.k) + "," + std::to_string(c.cell.n) + "," +
           std::to_string(c.cell.s) + "," + std::to_string(c.cell.r) + "," +
           num(c.cell.eta) + "," + std::to_string(c.trials) + "," +
           std::to_string(c.successes) + "," + num(c.rate) + "," +
           num(c.mean_err_x1) + "," + num(c.mean_err_x2) + "," +
           std::to_string(c.bound_violations) + "\n";
  }
  return out;
}

std::string PhaseTable::json(bool include_timing) const {
  nlohmann::ordered_json j;
  j["cells"] = nlohmann::ordered_json::array();
  for (const CellSummary& c : cells) {
    j["cells"].push_back({{"cell", cell_json(c.cell)},
                          {"trials", c.trials},
                          {"successes", c.successes},
                          {"rate", c.rate},
                          {"mean_err_x1", c.mean_err_x1},
                          {"mean_err_x2", c.mean_err_x2},
                          {"bound_violations", c.bound_violations},
                          {"failures", c.failures}});
  }
  j["records"] = nlohmann::ordered_json::array();
  for (const TrialRecord& r : records) j["records"].push_back(record_json(r, include_timing));
  return j.dump(2) + "\n";
}

BoundReport verify_noisy_bounds(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<double> etas = cfg.eta_values;
  std::sort(etas.begin(), etas.end());
  etas.erase(std::unique(etas.begin(), etas.end()), etas.end());
  if (etas.size() < 3 || etas.front() != 0.0) {
    throw Error(ErrorKind::InvalidArgument,
                "verify-bounds: need at least 3 distinct eta values including 0");
  }

  ExperimentConfig base = cfg;
  base.eta_values = {0.0};
  const std::vector<Cell> cells = grid_cells(base);
  const std::size_t trials = cfg.trials_per_cell;

  // One job per (cell, trial): the matrix, plant and noise direction are
  // shared by every eta, and the certificate is computed once.
  std::vector<std::vector<TrialRecord>> per_job(cells.size() * trials);
  parallel_for(per_job.size(), cfg.threads, [&](std::size_t job) {
    const Cell& cell = cells[job / trials];
    const Seed seed = trial_seed(cell, cfg.base_seed, job % trials);
    std::vector<TrialRecord>& out = per_job[job];
    try {
      const Instance inst = draw_instance(cell, seed, cfg.signal_model);
      std::optional<bool> certified;
      if (cfg.certify) certified = partial_nsp_check(*inst.part, cell.s).holds;
      for (double eta : etas) {
        Cell c = cell;
        c.eta = eta;
        TrialRecord rec = evaluate(cfg, inst, c, seed);
        rec.certified = certified;
        out.push_back(std::move(rec));
      }
    } catch (const Error& e) {
      for (double eta : etas) {
        TrialRecord rec;
        rec.cell = cell;
        rec.cell.eta = eta;
        rec.seed = seed;
        rec.error = std::string(to_string(e.kind())) + ": " + e.what();
        out.push_back(std::move(rec));
      }
    }
  });

  BoundReport report;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    BoundCell bc;
    bc.cell = cells[c];
    bc.trials = trials;
    bc.etas = etas;
    bc.mean_err_x1.assign(etas.size(), 0.0);
    std::vector<std::size_t> counts(etas.size(), 0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t points = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& recs = per_job[c * trials + t];
      if (!recs.empty() && recs.front().certified.value_or(false)) ++bc.certified_trials;
      for (std::size_t e = 0; e < recs.size(); ++e) {
        const TrialRecord& rec = recs[e];
        report.records.push_back(rec);
        if (!rec.error.empty() || !rec.converged) continue;
        ++bc.converged;
        if (rec.bound_violated) ++bc.x2_violations;
        if (cfg.certify && !rec.certified.value_or(false)) continue;
        const double x = rec.cell.eta;
        const double y = rec.err_x1;
        bc.mean_err_x1[e] += y;
        ++counts[e];
        if (e == 0) bc.max_err_at_zero = std::max(bc.max_err_at_zero, y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++points;
      }
    }
    if (bc.converged == 0) {
      throw Error(ErrorKind::InsufficientData,
                  "verify-bounds: cell (k=" + std::to_string(bc.cell.k) +
                      ", s=" + std::to_string(bc.cell.s) +
                      ", r=" + std::to_string(bc.cell.r) +
                      ") has no converged trials");
    }
    for (std::size_t e = 0; e < etas.size(); ++e) {
      bc.mean_err_x1[e] = counts[e] ? bc.mean_err_x1[e] / static_cast<double>(counts[e])
                                    : std::numeric_limits<double>::quiet_NaN();
    }
    const double np = static_cast<double>(points);
    const double denom = np * sxx - sx * sx;
    if (points >= 2 && denom > 0.0) {
      bc.slope = (np * sxy - sx * sy) / denom;
      bc.intercept = (sy - bc.slope * sx) / np;
    } else {
      bc.slope = bc.intercept = std::numeric_limits<double>::quiet_NaN();
    }
    report.cells.push_back(std::move(bc));
  }

  // Compressible plants at eta = 0.
  if (!cfg.decay_values.empty()) {
    std::vector<std::pair<std::size_t, double>> jobs;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].s == cells[c].r) continue;
      for (double d : cfg.decay_values) jobs.emplace_back(c, d);
    }
    report.compressible.resize(jobs.size());
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
      const auto [c, decay] = jobs[j];
      const Cell& cell = cells[c];
      ExperimentConfig local = cfg;
      local.signal_model.magnitude = SignalModel::Magnitude::GeometricDecay;
      local.signal_model.decay = decay;
      CompressibleRow row;
      row.cell = cell;
      row.decay = decay;
      std::size_t ok = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        const Seed seed = trial_seed(cell, cfg.base_seed, t);
        const TrialRecord rec = run_trial(local, cell, seed);
        if (!rec.error.empty()) continue;
        ++ok;
        row.mean_err_x1 += rec.err_x1;
        row.max_err_x1 = std::max(row.max_err_x1, rec.err_x1);
        row.mean_tail += rec.compressibility;
        if (rec.compressibility > 0.0) {
          row.d_hat = std::max(row.d_hat, rec.err_x1 / rec.compressibility);
        }
      }
      row.trials = ok;
      if (ok > 0) {
        row.mean_err_x1 /= static_cast<double>(ok);
        row.mean_tail /= static_cast<double>(ok);
      }
      report.compressible[j] = row;
    });
  }
  return report;
}

std::string BoundReport::csv() const {
  std::string out =
      "k,n,s,r,trials,certified_trials,converged,x2_violations,intercept,slope,"
      "max_err_at_zero\n";
  for (const BoundCell& c : cells) {
    out += std::to_string(c.cell.k) + "," + std::to_string(c.cell.n) + "," +
           std::to_string(c.cell.s) + "," + std::to_string(c.cell.r) + "," +
           std::to_string(c.trials) + "," + std::to_string(c.certified_trials) +
           "," + std::to_string(c.converged) + "," +
           std::to_string(c.x2_violations) + "," + num(c.intercept) + "," +
           num(c.slope) + "," + num(c.max_err_at_zero) + "\n";
  }
  return out;
}

std::string BoundReport::json() const {
  nlohmann::ordered_json j;
  j["constants_treatment"] = constants_treatment;
  j["cells"] = nlohmann::ordered_json::array();
  for (const BoundCell& c : cells) {
    j["cells"].push_back({{"cell", cell_json(c.cell)},
                          {"trials", c.trials},
                          {"certified_trials", c.certified_trials},
                          {"converged", c.converged},
                          {"x2_violations", c.x2_violations},
                          {"etas", c.etas},
                          {"mean_err_x1", c.mean_err_x1},
                          {"max_err_at_zero", c.max_err_at_zero},
                          {"intercept", c.intercept},
                          {"slope", c.slope}});
  }
  j["compressible"] = nlohmann::ordered_json::array();
  for (const CompressibleRow& r : compressible) {
    j["compressible"].push_back({{"cell", cell_json(r.cell)},
                                 {"decay", r.decay},
                                 {"trials", r.trials},
                                 {"mean_err_x1", r.mean_err_x1},
                                 {"max_err_x1", r.max_err_x1},
                                 {"mean_tail", r.mean_tail},
                                 {"d_hat", r.d_hat}});
  }
  j["records"] = nlohmann::ordered_json::array();
  for (const TrialRecord& r : records) j["records"].push_back(record_json(r, false));
  return j.dump(2) + "\n";
}

ComparisonTable compare_full_vs_partial(const ExperimentConfig& cfg) {
  const bool has_zero =
      std::find(cfg.r_values.begin(), cfg.r_values.end(), 0) != cfg.r_values.end();
  const bool has_positive = std::any_of(cfg.r_values.begin(), cfg.r_values.end(),
                                        [](std::size_t r) { return r > 0; });
  if (!has_zero || !has_positive) {
    throw Error(ErrorKind::InvalidArgument,
                "compare: r_values must include 0 and at least one r > 0");
  }
  ComparisonTable table;
  table.phase = phase_diagram(cfg);

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t s : cfg.s_values) {
    for (std::size_t r : cfg.r_values) {
      if (r > s || s > cfg.n || !seen.insert({s, r}).second) continue;
      ComparisonRow row;
      row.n = cfg.n;
      row.s = s;
      row.r = r;
      row.target_rate = cfg.target_rate;
      // Cells are sorted by k first, so the first hit is the smallest k.
      for (const CellSummary& c : table.phase.cells) {
        if (c.cell.s != s || c.cell.r != r) continue;
        if (c.rate >= cfg.target_rate) {
          row.min_k = c.cell.k;
          break;
        }
      }
      if (s < cfg.n && cfg.bound_delta > 0.0 && cfg.bound_delta < 1.0) {
        row.analytic_bound = gaussian_sample_bound(cfg.n, s, r, cfg.bound_delta);
      }
      table.rows.push_back(row);
    }
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.s, a.r) < std::tie(b.s, b.r);
  });
  return table;
}

std::string ComparisonTable::csv() const {
  std::string out = "n,s,r,target_rate,min_k,analytic_bound\n";
  for (const ComparisonRow& r : rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.s) + "," +
           std::to_string(r.r) + "," + num(r.target_rate) + "," +
           (r.min_k ? std::to_string(*r.min_k) : std::string("NA")) + "," +
           (r.analytic_bound ? num(*r.analytic_bound) : std::string("NA")) + "\n";
  }
  return out;
}

}  // namespace pcs
