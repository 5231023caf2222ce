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

// pcs: command-line front end. Exit codes: 0 ok, 1 domain error, 2 usage.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcs/certificates.hpp"
#include "pcs/error.hpp"
#include "pcs/experiments.hpp"
#include "pcs/linalg.hpp"
#include "pcs/matrix_io.hpp"
#include "pcs/partial.hpp"
#include "pcs/randgen.hpp"
#include "pcs/solvers.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool has_extension(const std::string& path, const char* ext) {
  return fs::path(path).extension() == ext;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw pcs::Error(pcs::ErrorKind::InvalidArgument, "cannot write " + path);
  }
  out << text;
}

// Writes `text` to --out when given, otherwise to stdout.
void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text(out, text);
  }
}

ordered_json vector_json(const pcs::Vector& v) { return ordered_json(v); }

std::string report_text(const pcs::SolveReport& r) {
  std::ostringstream os;
  os << "status: " << pcs::to_string(r.status) << "\n"
     << "objective: " << pcs::io::format_double(r.objective) << "\n"
     << "iterations: " << r.iterations << "\n";
  return os.str();
}

ordered_json report_json(const pcs::SolveReport& r) {
  return {{"status", pcs::to_string(r.status)},
          {"objective", r.objective},
          {"primal_residual", r.primal_residual},
          {"dual_residual", r.dual_residual},
          {"iterations", r.iterations}};
}

pcs::Seed seed_from(const std::string& text) {
  pcs::Seed seed;
  const auto colon = text.find(':');
  seed.base = pcs::parse_seed_value(text.substr(0, colon));
  if (colon != std::string::npos) {
    seed.stream = pcs::parse_seed_value(text.substr(colon + 1));
  }
  return seed;
}

pcs::SignalModel::Magnitude magnitude_from(const std::string& name) {
  using M = pcs::SignalModel::Magnitude;
  if (name == "uniform") return M::UniformInRange;
  if (name == "unit") return M::UnitMagnitudeRandomSign;
  return M::GeometricDecay;
}

pcs::ExperimentConfig load_config(const std::string& path,
                                  const std::vector<std::string>& overrides,
                                  const std::string& seed,
                                  std::optional<std::size_t> threads) {
  pcs::ExperimentConfig cfg = pcs::read_config(path);
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value");
    pcs::apply_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!seed.empty()) cfg.base_seed = seed_from(seed);
  if (threads) cfg.threads = std::max<std::size_t>(1, *threads);
  return cfg;
}

int exit_code_for(pcs::ErrorKind kind) {
  switch (kind) {
    case pcs::ErrorKind::ParseError:
    case pcs::ErrorKind::InvalidArgument:
      return 2;
    default:
      return 1;
  }
}

void report_error(bool json, std::string_view kind, const std::string& msg,
                  int code) {
  if (json) {
    ordered_json j = {{"error", kind}, {"message", msg}, {"exit_code", code}};
    std::cerr << j.dump() << "\n";
  } else {
    std::cerr << "pcs: " << kind << ": " << msg << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partially sparse recovery: solvers, certificates, experiments"};
  app.require_subcommand(1);
  bool json_errors = false;
  app.add_flag("--json-errors", json_errors, "Emit errors as JSON on stderr");

  // solve
  std::string matrix_path, y_path, weights_path, out_path, method = "simplex";
  double eta = 0.0;
  std::size_t max_iters = 20000;
  auto* solve = app.add_subcommand("solve", "Weighted l1 minimization over all columns");
  solve->add_option("--matrix", matrix_path, "Matrix file")->required();
  solve->add_option("--y", y_path, "Measurement vector file")->required();
  solve->add_option("--eta", eta, "Noise level (0 = equality constraint)")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--weights", weights_path, "Weight vector file");
  solve->add_option("--method", method, "simplex or splitting")
      ->check(CLI::IsMember({"simplex", "splitting"}));
  solve->add_option("--max-iters", max_iters, "Splitting iteration cap");
  solve->add_option("--out", out_path, "Write x (.txt) or a JSON report (.json)");

  // recover
  std::size_t r = 0;
  std::string route = "projected";
  auto* recover = app.add_subcommand("recover", "Partially sparse recovery");
  recover->add_option("--matrix", matrix_path, "Matrix file")->required();
  recover->add_option("--r", r, "Number of trailing dense columns")->required();
  recover->add_option("--y", y_path, "Measurement vector file")->required();
  recover->add_option("--eta", eta, "Noise level")->check(CLI::NonNegativeNumber);
  recover->add_option("--route", route, "projected or direct")
      ->check(CLI::IsMember({"projected", "direct"}));
  recover->add_option("--method", method, "simplex or splitting (eta = 0)")
      ->check(CLI::IsMember({"simplex", "splitting"}));
  recover->add_option("--max-iters", max_iters, "Splitting iteration cap");
  recover->add_option("--out", out_path, "Write x (.txt) or a JSON report (.json)");

  // certify
  std::string property;
  std::size_t order = 0;
  std::uint64_t cap = pcs::kDefaultEnumerationCap;
  auto* certify = app.add_subcommand("certify", "Exhaustive NSP / RIP certificates");
  certify->add_option("property", property, "nsp|partial-nsp|rip|partial-rip|mixed-rip")
      ->required()
      ->check(CLI::IsMember({"nsp", "partial-nsp", "rip", "partial-rip", "mixed-rip"}));
  certify->add_option("--matrix", matrix_path, "Matrix file")->required();
  certify->add_option("--order", order, "Sparsity order s")->required();
  certify->add_option("--r", r, "Dense columns (partial properties)");
  certify->add_option("--cap", cap, "Enumeration cap");
  certify->add_option("--out", out_path, "Write the JSON certificate");

  // bound
  std::size_t bn = 0, bs = 0, br = 0;
  double delta = 0.5;
  auto* bound = app.add_subcommand("bound", "Gaussian measurement-count bound");
  bound->add_option("--n", bn, "Signal length N")->required();
  bound->add_option("--s", bs, "Total sparsity s")->required();
  bound->add_option("--r", br, "Dense columns r")->required();
  bound->add_option("--delta", delta, "Target partial RIP constant")->required();

  // gen
  std::string gen_kind, seed_text, magnitude = "uniform", signal_path, noise_path;
  std::size_t rows = 0, cols = 0, gs = 0, gk = 0;
  double decay = 0.5, lo = 0.5, hi = 2.0;
  bool interior = false;
  auto* gen = app.add_subcommand("gen", "Seeded instance generation");
  gen->add_option("kind", gen_kind, "matrix|signal|noise|measure")
      ->required()
      ->check(CLI::IsMember({"matrix", "signal", "noise", "measure"}));
  gen->add_option("--seed", seed_text, "Seed: BASE or BASE:STREAM (decimal or 0x hex)");
  gen->add_option("--rows,--k", rows, "matrix: rows; noise: length");
  gen->add_option("--cols,--n", cols, "matrix: columns; signal: length N");
  gen->add_option("--s", gs, "signal: total sparsity s");
  gen->add_option("--r", gk, "signal: dense entries r");
  gen->add_option("--magnitude", magnitude, "signal: uniform|unit|geometric")
      ->check(CLI::IsMember({"uniform", "unit", "geometric"}));
  gen->add_option("--lo", lo, "signal: uniform lower bound");
  gen->add_option("--hi", hi, "signal: uniform upper bound");
  gen->add_option("--decay", decay, "signal: geometric ratio");
  gen->add_option("--eta", eta, "noise: radius")->check(CLI::NonNegativeNumber);
  gen->add_flag("--interior", interior, "noise: sample inside the ball");
  gen->add_option("--matrix", matrix_path, "measure: matrix file");
  gen->add_option("--signal", signal_path, "measure: signal file");
  gen->add_option("--noise", noise_path, "measure: noise file");
  gen->add_option("--out", out_path, "Output file");

  // experiments
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::size_t> threads;
  bool full = false;
  auto add_config_options = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Config file (key = value)")->required();
    sub->add_option("--set", overrides, "Override a config key: key=value");
    sub->add_option("--seed", seed_text, "Override the base seed");
    sub->add_option("--threads", threads, "Worker threads");
    sub->add_option("--out", out_path, "Write CSV (.csv) or JSON (.json)");
  };
  auto* phase = app.add_subcommand("phase", "Monte Carlo phase diagram");
  add_config_options(phase);
  phase->add_flag("--full", full, "JSON output includes per-trial records with timing");
  auto* verify = app.add_subcommand("verify-bounds", "Noisy error-bound verification");
  add_config_options(verify);
  auto* compare = app.add_subcommand("compare", "Full vs partial measurement counts");
  add_config_options(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (json_errors) {
      report_error(true, "UsageError", e.what(), 2);
    } else {
      app.exit(e);
    }
    return 2;
  }

  try {
    if (*solve) {
      const pcs::DenseMatrix a = pcs::io::read_matrix(matrix_path);
      const pcs::Vector y = pcs::io::read_vector(y_path);
      pcs::SolveOptions opts;
      opts.max_iters = max_iters;
      if (!weights_path.empty()) opts.weights = pcs::io::read_vector(weights_path);
      opts.validate(a.cols());
      pcs::SolveReport rep;
      if (eta > 0.0) {
        rep = pcs::admm_bpdn(a, y, eta, opts);
      } else if (method == "simplex") {
        rep = pcs::simplex_l1(a, y, opts.weights_or_ones(a.cols()));
      } else {
        rep = pcs::admm_basis_pursuit(a, y, opts);
      }
      if (has_extension(out_path, ".json")) {
        ordered_json j = report_json(rep);
        j["x"] = vector_json(rep.x);
        write_text(out_path, j.dump(2) + "\n");
      } else if (!out_path.empty()) {
        pcs::io::write_vector(out_path, rep.x);
        std::cout << report_text(rep);
      } else {
        std::cout << report_text(rep) << "x:\n" << pcs::io::format_vector(rep.x);
      }
    } else if (*recover) {
      const pcs::PartitionedMatrix part(pcs::io::read_matrix(matrix_path), r);
      const pcs::Vector y = pcs::io::read_vector(y_path);
      pcs::RecoverOptions opts;
      opts.solver.max_iters = max_iters;
      opts.method = method == "simplex" ? pcs::Method::Simplex : pcs::Method::Splitting;
      const pcs::PartialSolution sol =
          route == "projected" ? pcs::recover_projected(part, y, eta, opts)
                               : pcs::recover_direct(part, y, eta, opts);
      for (const std::string& w : sol.warnings) std::cerr << "pcs: warning: " << w << "\n";
      if (has_extension(out_path, ".json")) {
        ordered_json j = report_json(sol.x1_report);
        j["route"] = pcs::to_string(sol.route);
        j["x1"] = vector_json(sol.x1);
        j["x2"] = vector_json(sol.x2);
        j["x2_residual"] = sol.x2_residual;
        j["warnings"] = sol.warnings;
        write_text(out_path, j.dump(2) + "\n");
      } else if (!out_path.empty()) {
        pcs::io::write_vector(out_path, sol.joined());
        std::cout << report_text(sol.x1_report);
      } else {
        std::cout << report_text(sol.x1_report) << "route: "
                  << pcs::to_string(sol.route) << "\n"
                  << "x1:\n" << pcs::io::format_vector(sol.x1) << "x2:\n"
                  << (sol.x2.empty() ? std::string("(empty)\n")
                                     : pcs::io::format_vector(sol.x2));
      }
    } else if (*certify) {
      const pcs::DenseMatrix a = pcs::io::read_matrix(matrix_path);
      const std::uint64_t hash = pcs::matrix_hash(a);
      std::string json;
      std::ostringstream human;
      if (property == "nsp" || property == "partial-nsp") {
        const pcs::NspReport rep =
            property == "nsp" ? pcs::nsp_check(a, order, cap)
                              : pcs::partial_nsp_check(pcs::PartitionedMatrix(a, r),
                                                       order, cap);
        human << "property: " << rep.property << "\norder: " << rep.order
              << "\nholds: " << (rep.holds ? "true" : "false")
              << "\nworst_ratio: " << pcs::io::format_double(rep.worst_ratio) << "\n";
        json = pcs::certificate_json(rep, hash);
      } else {
        pcs::RipReport rep;
        if (property == "rip") {
          rep = pcs::rip_constant(a, order, cap);
        } else {
          const pcs::PartitionedMatrix part(a, r);
          rep = property == "partial-rip" ? pcs::partial_rip_constant(part, order, cap)
                                          : pcs::mixed_rip_constant(part, order, cap);
        }
        human << "property: " << rep.property << "\norder: " << rep.order
              << "\ndelta: " << pcs::io::format_double(rep.delta) << "\n";
        json = pcs::certificate_json(rep, hash);
      }
      std::cout << human.str();
      if (!out_path.empty()) write_text(out_path, json);
    } else if (*bound) {
      std::cout << pcs::io::format_double(pcs::gaussian_sample_bound(bn, bs, br, delta))
                << "\n";
    } else if (*gen) {
      if (gen_kind == "measure") {
        if (matrix_path.empty() || signal_path.empty()) {
          throw UsageError("gen measure needs --matrix and --signal");
        }
        const pcs::DenseMatrix a = pcs::io::read_matrix(matrix_path);
        const pcs::Vector x = pcs::io::read_vector(signal_path);
        if (x.size() != a.cols()) {
          throw pcs::Error(pcs::ErrorKind::DimensionMismatch,
                           "gen measure: signal length must equal matrix columns");
        }
        pcs::Vector y = pcs::linalg::multiply(a, x);
        if (!noise_path.empty()) {
          const pcs::Vector e = pcs::io::read_vector(noise_path);
          if (e.size() != y.size()) {
            throw pcs::Error(pcs::ErrorKind::DimensionMismatch,
                             "gen measure: noise length must equal matrix rows");
          }
          y = pcs::linalg::add(y, e);
        }
        emit(out_path, pcs::io::format_vector(y));
      } else {
        if (seed_text.empty()) throw UsageError("gen needs --seed");
        const pcs::Seed seed = seed_from(seed_text);
        if (gen_kind == "matrix") {
          if (rows == 0 || cols == 0) throw UsageError("gen matrix needs --rows and --cols");
          emit(out_path, pcs::io::format_matrix(pcs::gaussian_matrix(rows, cols, seed)));
        } else if (gen_kind == "signal") {
          if (cols == 0) throw UsageError("gen signal needs --n");
          if (gk > gs || gs > cols) throw UsageError("gen signal needs r <= s <= n");
          pcs::SignalModel model;
          model.magnitude = magnitude_from(magnitude);
          model.lo = lo;
          model.hi = hi;
          model.decay = decay;
          const std::size_t n1 = cols - gk;
          const std::size_t sparsity =
              model.magnitude == pcs::SignalModel::Magnitude::GeometricDecay ? n1
                                                                             : gs - gk;
          const pcs::PartiallySparseSignal sig =
              pcs::planted_signal(n1, sparsity, gk, model, seed);
          emit(out_path, pcs::io::format_vector(sig.joined()));
        } else {
          if (rows == 0) throw UsageError("gen noise needs --k");
          emit(out_path,
               pcs::io::format_vector(pcs::noise_on_ball(rows, eta, seed, !interior)));
        }
      }
    } else if (*phase) {
      const auto cfg = load_config(config_path, overrides, seed_text, threads);
      const pcs::PhaseTable table = pcs::phase_diagram(cfg);
      if (has_extension(out_path, ".json")) {
        write_text(out_path, table.json(full));
      } else {
        emit(out_path, table.csv());
      }
    } else if (*verify) {
      const auto cfg = load_config(config_path, overrides, seed_text, threads);
      const pcs::BoundReport rep = pcs::verify_noisy_bounds(cfg);
      if (has_extension(out_path, ".json")) {
        write_text(out_path, rep.json());
      } else {
        emit(out_path, rep.csv());
      }
    } else if (*compare) {
      const auto cfg = load_config(config_path, overrides, seed_text, threads);
      const pcs::ComparisonTable table = pcs::compare_full_vs_partial(cfg);
      if (has_extension(out_path, ".json")) {
        ordered_json j = ordered_json::array();
        for (const auto& row : table.rows) {
          j.push_back({{"n", row.n},
                       {"s", row.s},
                       {"r", row.r},
                       {"target_rate", row.target_rate},
                       {"min_k", row.min_k ? ordered_json(*row.min_k) : ordered_json()},
                       {"analytic_bound", row.analytic_bound
                                              ? ordered_json(*row.analytic_bound)
                                              : ordered_json()}});
        }
        write_text(out_path, j.dump(2) + "\n");
      } else {
        emit(out_path, table.csv());
      }
    }
  } catch (const UsageError& e) {
    report_error(json_errors, "UsageError", e.what(), 2);
    return 2;
  } catch (const pcs::Error& e) {
    const int code = exit_code_for(e.kind());
    report_error(json_errors, pcs::to_string(e.kind()), e.what(), code);
    return code;
  }
  return 0;
}
