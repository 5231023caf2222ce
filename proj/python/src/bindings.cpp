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


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcs/certificates.hpp"
#include "pcs/error.hpp"
#include "pcs/experiments.hpp"
#include "pcs/partial.hpp"
#include "pcs/randgen.hpp"
#include "pcs/solvers.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

pcs::DenseMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw pcs::Error(pcs::ErrorKind::DimensionMismatch, "expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return pcs::DenseMatrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

pcs::Vector to_vector(const Array& a) {
  if (a.ndim() != 1) throw pcs::Error(pcs::ErrorKind::DimensionMismatch, "expected a 1-d array");
  return pcs::Vector(a.data(), a.data() + a.shape(0));
}

py::array_t<double> from_vector(const pcs::Vector& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<double> from_matrix(const pcs::DenseMatrix& m) {
  const std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(m.rows()),
                                       static_cast<py::ssize_t>(m.cols())};
  return py::array_t<double>(shape, m.entries().data());
}

pcs::SolveOptions options(std::size_t max_iters, double abs_tol, double rel_tol, bool adaptive) {
  pcs::SolveOptions o;
  o.max_iters = max_iters;
  o.abs_tol = abs_tol;
  o.rel_tol = rel_tol;
  o.adaptive_penalty = adaptive;
  return o;
}

py::dict report_dict(const pcs::SolveReport& r) {
  py::dict d;
  d["x"] = from_vector(r.x);
  d["objective"] = r.objective;
  d["primal_residual"] = r.primal_residual;
  d["dual_residual"] = r.dual_residual;
  d["iterations"] = r.iterations;
  d["status"] = std::string(pcs::to_string(r.status));
  return d;
}

py::dict nsp_dict(const pcs::NspReport& r) {
  py::dict d;
  d["property"] = r.property;
  d["holds"] = r.holds;
  d["order"] = r.order;
  d["worst_ratio"] = r.worst_ratio;
  d["witness_v"] = r.witness_v ? py::object(from_vector(*r.witness_v)) : py::none();
  d["witness_support"] = r.witness_support ? py::cast(*r.witness_support) : py::none();
  return d;
}

py::dict rip_dict(const pcs::RipReport& r) {
  py::dict d;
  d["property"] = r.property;
  d["order"] = r.order;
  d["delta"] = r.delta;
  d["witness_support"] = r.witness_support;
  d["extreme_eigenvalue"] = r.extreme_eigenvalue;
  return d;
}

pcs::ExperimentConfig config(const std::string& text, const std::map<std::string, std::string>& overrides) {
  auto cfg = pcs::parse_config(text);
  for (const auto& [k, v] : overrides) pcs::apply_config_value(cfg, k, v);
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Partially sparse recovery: solvers, certificates, experiments";

  static py::exception<pcs::Error> error(m, "PcsError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const pcs::Error& e) {
      // args = (kind, message)
      py::tuple args = py::make_tuple(std::string(pcs::to_string(e.kind())), e.what());
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  m.def(
      "solve_l1",
      [](const Array& a, const Array& y, double eta, const std::string& method,
         std::optional<Array> weights, std::size_t max_iters, double abs_tol, double rel_tol,
         bool adaptive) {
        const auto mat = to_matrix(a);
        const auto rhs = to_vector(y);
        auto opts = options(max_iters, abs_tol, rel_tol, adaptive);
        if (weights) opts.weights = to_vector(*weights);
        pcs::SolveReport r;
        {
          py::gil_scoped_release release;
          if (eta > 0.0) {
            r = pcs::admm_bpdn(mat, rhs, eta, opts);
          } else if (method == "simplex") {
            const pcs::Vector w = opts.weights.value_or(pcs::Vector(mat.cols(), 1.0));
            r = pcs::simplex_l1(mat, rhs, w);
          } else if (method == "splitting") {
            r = pcs::admm_basis_pursuit(mat, rhs, opts);
          } else {
            throw pcs::Error(pcs::ErrorKind::InvalidArgument, "method must be simplex or splitting");
          }
        }
        return report_dict(r);
      },
      py::arg("a"), py::arg("y"), py::arg("eta") = 0.0, py::arg("method") = "simplex",
      py::arg("weights") = py::none(), py::arg("max_iters") = 20000, py::arg("abs_tol") = 1e-8,
      py::arg("rel_tol") = 1e-6, py::arg("adaptive_penalty") = false);

  m.def(
      "recover",
      [](const Array& a, std::size_t r, const Array& y, double eta, const std::string& route,
         const std::string& method, std::size_t max_iters, bool adaptive) {
        const pcs::PartitionedMatrix part(to_matrix(a), r);
        const auto rhs = to_vector(y);
        pcs::RecoverOptions opts;
        opts.solver = options(max_iters, 1e-8, 1e-6, adaptive);
        if (method == "simplex") opts.method = pcs::Method::Simplex;
        else if (method == "splitting") opts.method = pcs::Method::Splitting;
        else throw pcs::Error(pcs::ErrorKind::InvalidArgument, "method must be simplex or splitting");
        pcs::PartialSolution s;
        {
          py::gil_scoped_release release;
          if (route == "projected") s = pcs::recover_projected(part, rhs, eta, opts);
          else if (route == "direct") s = pcs::recover_direct(part, rhs, eta, opts);
          else throw pcs::Error(pcs::ErrorKind::InvalidArgument, "route must be projected or direct");
        }
        py::dict d;
        d["x1"] = from_vector(s.x1);
        d["x2"] = from_vector(s.x2);
        d["x"] = from_vector(s.joined());
        d["x1_report"] = report_dict(s.x1_report);
        d["x2_residual"] = s.x2_residual;
        d["route"] = std::string(pcs::to_string(s.route));
        d["warnings"] = s.warnings;
        return d;
      },
      py::arg("a"), py::arg("r"), py::arg("y"), py::arg("eta") = 0.0,
      py::arg("route") = "projected", py::arg("method") = "simplex",
      py::arg("max_iters") = 20000, py::arg("adaptive_penalty") = true);

  m.def(
      "reduce_problem",
      [](const Array& a, std::size_t r, const Array& y) {
        const pcs::PartitionedMatrix part(to_matrix(a), r);
        const auto red = pcs::reduce_problem(part, to_vector(y));
        return py::make_tuple(from_matrix(red.pa1), from_vector(red.py));
      },
      py::arg("a"), py::arg("r"), py::arg("y"), "Return (P A1, P y).");

  const auto cap = pcs::kDefaultEnumerationCap;
  m.def("rip_constant",
        [](const Array& a, std::size_t s, std::uint64_t cap) {
          return rip_dict(pcs::rip_constant(to_matrix(a), s, cap));
        },
        py::arg("a"), py::arg("s"), py::arg("cap") = cap);
  m.def("partial_rip_constant",
        [](const Array& a, std::size_t r, std::size_t s, std::uint64_t cap) {
          return rip_dict(pcs::partial_rip_constant(pcs::PartitionedMatrix(to_matrix(a), r), s, cap));
        },
        py::arg("a"), py::arg("r"), py::arg("s"), py::arg("cap") = cap);
  m.def("mixed_rip_constant",
        [](const Array& a, std::size_t r, std::size_t s, std::uint64_t cap) {
          return rip_dict(pcs::mixed_rip_constant(pcs::PartitionedMatrix(to_matrix(a), r), s, cap));
        },
        py::arg("a"), py::arg("r"), py::arg("s"), py::arg("cap") = cap);
  m.def("nsp_check",
        [](const Array& a, std::size_t s, std::uint64_t cap) {
          return nsp_dict(pcs::nsp_check(to_matrix(a), s, cap));
        },
        py::arg("a"), py::arg("s"), py::arg("cap") = cap);
  m.def("partial_nsp_check",
        [](const Array& a, std::size_t r, std::size_t s, std::uint64_t cap) {
          return nsp_dict(pcs::partial_nsp_check(pcs::PartitionedMatrix(to_matrix(a), r), s, cap));
        },
        py::arg("a"), py::arg("r"), py::arg("s"), py::arg("cap") = cap);
  m.def("gaussian_sample_bound", &pcs::gaussian_sample_bound, py::arg("n"), py::arg("s"),
        py::arg("r"), py::arg("delta"));
  m.def("best_s_term_error",
        [](const Array& x, std::size_t s) { return pcs::best_s_term_error(to_vector(x), s); },
        py::arg("x"), py::arg("s"));

  m.def("gaussian_matrix",
        [](std::size_t k, std::size_t n, std::uint64_t base, std::uint64_t stream) {
          return from_matrix(pcs::gaussian_matrix(k, n, pcs::Seed{base, stream}));
        },
        py::arg("k"), py::arg("n"), py::arg("seed"), py::arg("stream") = 0);
  m.def(
      "planted_signal",
      [](std::size_t n, std::size_t s, std::size_t r, const std::string& magnitude, double lo,
         double hi, double decay, std::uint64_t base, std::uint64_t stream) {
        pcs::SignalModel model;
        using M = pcs::SignalModel::Magnitude;
        if (magnitude == "uniform") model.magnitude = M::UniformInRange;
        else if (magnitude == "unit") model.magnitude = M::UnitMagnitudeRandomSign;
        else if (magnitude == "geometric") model.magnitude = M::GeometricDecay;
        else throw pcs::Error(pcs::ErrorKind::InvalidArgument, "unknown magnitude law");
        model.lo = lo;
        model.hi = hi;
        model.decay = decay;
        if (r > s || r > n) throw pcs::Error(pcs::ErrorKind::InvalidArgument, "need r <= s and r <= n");
        const auto sig = pcs::planted_signal(n - r, s - r, r, model, pcs::Seed{base, stream});
        return py::make_tuple(from_vector(sig.x1), from_vector(sig.x2));
      },
      py::arg("n"), py::arg("s"), py::arg("r"), py::arg("magnitude") = "uniform",
      py::arg("lo") = 0.5, py::arg("hi") = 2.0, py::arg("decay") = 0.5, py::arg("seed") = 0,
      py::arg("stream") = 0);
  m.def("noise_on_ball",
        [](std::size_t k, double eta, std::uint64_t base, std::uint64_t stream, bool boundary) {
          return from_vector(pcs::noise_on_ball(k, eta, pcs::Seed{base, stream}, boundary));
        },
        py::arg("k"), py::arg("eta"), py::arg("seed"), py::arg("stream") = 0,
        py::arg("boundary") = true);

  using Overrides = std::map<std::string, std::string>;
  m.def(
      "phase_diagram",
      [](const std::string& text, const Overrides& overrides, const std::string& format) {
        const auto cfg = config(text, overrides);
        pcs::PhaseTable t;
        {
          py::gil_scoped_release release;
          t = pcs::phase_diagram(cfg);
        }
        return format == "json" ? t.json() : t.csv();
      },
      py::arg("config"), py::arg("overrides") = Overrides{}, py::arg("format") = "csv",
      "Run a phase diagram from config text; returns CSV or JSON text.");
  m.def(
      "verify_noisy_bounds",
      [](const std::string& text, const Overrides& overrides, const std::string& format) {
        const auto cfg = config(text, overrides);
        pcs::BoundReport b;
        {
          py::gil_scoped_release release;
          b = pcs::verify_noisy_bounds(cfg);
        }
        return format == "json" ? b.json() : b.csv();
      },
      py::arg("config"), py::arg("overrides") = Overrides{}, py::arg("format") = "csv");
  m.def(
      "compare_full_vs_partial",
      [](const std::string& text, const Overrides& overrides) {
        const auto cfg = config(text, overrides);
        py::gil_scoped_release release;
        return pcs::compare_full_vs_partial(cfg).csv();
      },
      py::arg("config"), py::arg("overrides") = Overrides{});
}
