#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <vector>

#include "vbdf2/experiments.hpp"
#include "vbdf2/integrator.hpp"
#include "vbdf2/io.hpp"
#include "vbdf2/kernels.hpp"
#include "vbdf2/mesh.hpp"
#include "vbdf2/spatial.hpp"

namespace py = pybind11;
using namespace vbdf2;

namespace {

StartingScheme scheme_from_string(const std::string& name) {
  if (name == "bdf1") return StartingScheme::bdf1;
  if (name == "exact") return StartingScheme::exact_first_step;
  if (name == "trapezoid") return StartingScheme::trapezoid_first_step;
  throw std::invalid_argument("unknown starting scheme: " + name);
}

py::dict trace_to_dict(const SolveTrace& trace) {
  std::vector<double> t, l2, h1, energy;
  for (const TraceRecord& rec : trace.records) {
    t.push_back(rec.t);
    l2.push_back(rec.l2_norm);
    h1.push_back(rec.h1_semi);
    energy.push_back(rec.energy);
  }
  py::dict d;
  d["t"] = t;
  d["l2_norm"] = l2;
  d["h1_semi"] = h1;
  d["energy"] = energy;
  d["energy_monotone"] = trace.energy_monotone;
  d["l2_monotone"] = trace.l2_monotone;
  d["l2_bound_ok"] = trace.l2_bound_ok;
  return d;
}

py::dict row_to_dict(const ConvergenceRow& row) {
  py::dict d;
  d["N"] = row.n_steps;
  d["e_N"] = row.error;
  d["tau"] = row.tau_max;
  if (row.order) {
    d["order"] = *row.order;
  } else {
    d["order"] = py::none();
  }
  d["max_r"] = row.r_max;
  d["N1"] = row.n1;
  return d;
}

}  // namespace

PYBIND11_MODULE(_vbdf2, m) {
  m.doc() = "variable-step BDF2 time stepping with discrete orthogonal "
            "convolution kernels";

  m.def("s1_ratio_limit", &s1_ratio_limit);
  m.def("grigorieff_ratio_limit", &grigorieff_ratio_limit);

  py::class_<TimeMesh>(m, "TimeMesh")
      .def_static("from_levels",
                  [](std::vector<double> t) {
                    return TimeMesh::from_levels(std::move(t));
                  })
      .def_static("from_steps",
                  [](std::vector<double> tau) {
                    return TimeMesh::from_steps(std::move(tau));
                  })
      .def_property_readonly("n_steps", &TimeMesh::n_steps)
      .def_property_readonly("final_time", &TimeMesh::final_time)
      .def("t", &TimeMesh::t, py::arg("k"))
      .def("tau", &TimeMesh::tau, py::arg("k"))
      .def("ratio", &TimeMesh::ratio, py::arg("k"))
      .def("max_step", &TimeMesh::max_step)
      .def("levels",
           [](const TimeMesh& mesh) {
             return std::vector<double>(mesh.levels().begin(),
                                        mesh.levels().end());
           })
      .def("steps",
           [](const TimeMesh& mesh) {
             return std::vector<double>(mesh.steps().begin(),
                                        mesh.steps().end());
           })
      .def("__repr__", [](const TimeMesh& mesh) {
        return "<TimeMesh N=" + std::to_string(mesh.n_steps()) +
               " T=" + format_double(mesh.final_time()) + ">";
      });

  m.def("uniform_mesh", &uniform_mesh, py::arg("final_time"),
        py::arg("n_steps"));
  m.def("random_mesh", &random_mesh, py::arg("final_time"), py::arg("n_steps"),
        py::arg("seed"));
  m.def("capped_random_mesh", &capped_random_mesh, py::arg("final_time"),
        py::arg("n_steps"), py::arg("seed"), py::arg("r_cap"));
  m.def("geometric_mesh", &geometric_mesh, py::arg("final_time"),
        py::arg("n_steps"), py::arg("ratio"));
  m.def("read_mesh_csv", &read_mesh_csv, py::arg("path"));
  m.def("write_mesh_csv", &write_mesh_csv, py::arg("mesh"), py::arg("path"));

  py::class_<RatioProfile>(m, "RatioProfile")
      .def_readonly("r", &RatioProfile::r)
      .def_readonly("r_max", &RatioProfile::r_max)
      .def_readonly("n0_count", &RatioProfile::n0_count)
      .def_readonly("n1_count", &RatioProfile::n1_count)
      .def_readonly("r_c", &RatioProfile::r_c)
      .def_readonly("r_hat_c", &RatioProfile::r_hat_c)
      .def_readonly("n_steps", &RatioProfile::n_steps);

  m.def("ratio_profile", &ratio_profile, py::arg("mesh"));
  m.def("check_s1", &check_s1, py::arg("profile"));
  m.def("gamma_n", &gamma_n, py::arg("profile"), py::arg("n"));

  py::class_<Bdf2Kernels>(m, "Bdf2Kernels")
      .def_property_readonly("levels", &Bdf2Kernels::levels)
      .def("b0", &Bdf2Kernels::b0, py::arg("n"))
      .def("b1", &Bdf2Kernels::b1, py::arg("n"));

  m.def("build_bdf2_kernels", &build_bdf2_kernels, py::arg("mesh"));
  m.def(
      "doc_recursive",
      [](const Bdf2Kernels& kernels, int n) { return doc_recursive(kernels, n); },
      py::arg("kernels"), py::arg("n"));
  m.def("doc_explicit", &doc_explicit, py::arg("kernels"), py::arg("n"),
        py::arg("k"));
  m.def("theta_hat", &theta_hat, py::arg("kernels"), py::arg("n"),
        py::arg("k"));
  m.def(
      "orthogonality_defect",
      [](const Bdf2Kernels& kernels, int n) {
        return orthogonality_defect(kernels, n);
      },
      py::arg("kernels"), py::arg("n"));
  m.def(
      "doc_row_sum",
      [](const Bdf2Kernels& kernels, int n) { return doc_row_sum(kernels, n); },
      py::arg("kernels"), py::arg("n"));
  m.def(
      "quadratic_form",
      [](const Bdf2Kernels& kernels, const std::vector<double>& w) {
        return quadratic_form(kernels, w);
      },
      py::arg("kernels"), py::arg("w"));
  m.def("psd_min_eigenvalue", &psd_min_eigenvalue, py::arg("kernels"),
        py::arg("n"));
  m.def(
      "c_r_constant",
      [](double r_c, int n0, double r_hat_c) {
        return c_r_constant(r_c, n0, r_hat_c);
      },
      py::arg("r_c"), py::arg("n0_count"), py::arg("r_hat_c") = 0.0);
  m.def(
      "c_r_constant_of",
      [](const RatioProfile& profile) { return c_r_constant(profile); },
      py::arg("profile"));
  m.def("doc_tail_sum", &doc_tail_sum, py::arg("kernels"), py::arg("j"),
        py::arg("n"));

  m.def(
      "solve_heat",
      [](double epsilon, const TimeMesh& mesh, const std::string& start,
         int modes) {
        const HeatRunResult result = solve_manufactured_heat(
            epsilon, mesh, scheme_from_string(start), modes);
        py::dict d;
        d["error"] = result.error;
        d["trace"] = trace_to_dict(result.trace);
        return d;
      },
      py::arg("epsilon"), py::arg("mesh"), py::arg("start") = "bdf1",
      py::arg("modes") = 32,
      "Manufactured heat problem exp(-t) sin(2 pi x) cos(2 pi y); returns the "
      "final-time L2 error and the march trace.");

  m.def(
      "dahlquist_march",
      [](std::complex<double> lambda, const TimeMesh& mesh,
         std::complex<double> y0) { return dahlquist_march(lambda, mesh, y0); },
      py::arg("lambda_"), py::arg("mesh"), py::arg("y0") = 1.0);

  m.def(
      "zero_stability_probe",
      [](const std::function<double(double, double)>& g,
         const std::function<double(double, double)>& dg_dy, double lipschitz,
         const TimeMesh& mesh, double y0, double y0_perturbed,
         const std::vector<double>& eps) {
        return zero_stability_probe(g, dg_dy, lipschitz, mesh, y0,
                                    y0_perturbed, eps);
      },
      py::arg("g"), py::arg("dg_dy"), py::arg("lipschitz"), py::arg("mesh"),
      py::arg("y0"), py::arg("y0_perturbed"),
      py::arg("perturbations") = std::vector<double>{});

  m.def(
      "run_convergence",
      [](double epsilon, std::uint64_t seed, const std::vector<int>& n_list,
         const std::string& family, const std::string& start, int modes) {
        ExperimentConfig config;
        config.epsilon = epsilon;
        config.seed = seed;
        if (!n_list.empty()) config.n_list = n_list;
        config.mesh_family = mesh_family_from_string(family);
        config.starting_scheme = scheme_from_string(start);
        config.modes = modes;
        py::list rows;
        for (const ConvergenceRow& row : run_convergence(config)) {
          rows.append(row_to_dict(row));
        }
        return rows;
      },
      py::arg("epsilon") = 1.0, py::arg("seed") = 1,
      py::arg("n_list") = std::vector<int>{}, py::arg("family") = "random",
      py::arg("start") = "bdf1", py::arg("modes") = 32);

  m.def(
      "run_stability_suite",
      [](std::uint64_t seed, int counts) {
        const StabilityReport report = run_stability_suite(seed, counts);
        py::list entries;
        for (const SuiteEntry& entry : report.entries) {
          py::dict e;
          e["suite"] = entry.name;
          e["runs"] = entry.runs;
          e["failures"] = entry.failures;
          e["worst_margin"] = entry.worst_margin;
          e["informational"] = entry.informational;
          e["note"] = entry.note;
          entries.append(e);
        }
        py::dict d;
        d["seed"] = report.seed;
        d["counts"] = report.counts;
        d["all_pass"] = report.all_pass();
        d["entries"] = entries;
        return d;
      },
      py::arg("seed") = 1, py::arg("counts") = 100);
}
