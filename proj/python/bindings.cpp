// Python bindings: thin wrappers returning plain lists and dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "eigenbound/cases.hpp"
#include "eigenbound/errors.hpp"
#include "eigenbound/material.hpp"
#include "eigenbound/properties.hpp"
#include "eigenbound/smalleig.hpp"

namespace py = pybind11;
using namespace eigenbound;

namespace {

py::object to_python(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

std::vector<std::vector<double>> to_rows(const DenseSymMatrix& m) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < m.order(); ++i) rows.emplace_back(m.row(i).begin(), m.row(i).end());
  return rows;
}

py::object run_case_py(const std::string& case_id, std::optional<std::size_t> n, std::optional<std::string> precond,
                       std::optional<std::string> mesh, std::uint64_t seed, bool run_pcg,
                       std::optional<std::string> out) {
  CaseConfig cfg;
  cfg.case_id = case_id;
  cfg.n = n;
  cfg.preconditioner = std::move(precond);
  cfg.mesh_file = std::move(mesh);
  cfg.seed = seed;
  cfg.run_pcg = run_pcg;
  CaseResult r;
  {
    py::gil_scoped_release release;
    r = run_case(cfg);
  }
  nlohmann::ordered_json j = case_report_json(r);
  if (out) {
    auto& files = j["files"] = nlohmann::ordered_json::array();
    for (const auto& p : write_case_outputs(r, *out)) files.push_back(p.string());
  }
  return to_python(j);
}

py::dict mesh_info(const std::string& path) {
  const Mesh mesh = read_mesh_file(path);
  std::size_t tris = 0;
  double area = 0.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    if (mesh.elements()[e].shape == ElementShape::Tri3) ++tris;
    area += mesh.element_area(e);
  }
  py::dict tags;
  for (const auto& b : mesh.boundary_edges()) {
    const py::str key(std::string(to_string(b.tag)));
    tags[key] = (tags.contains(key) ? tags[key].cast<std::size_t>() : 0) + 1;
  }
  py::dict d;
  d["vertices"] = mesh.vertex_count();
  d["elements"] = mesh.element_count();
  d["triangles"] = tris;
  d["dofs"] = mesh.dof_count();
  d["periodic_pairs"] = mesh.periodic_pairs().size();
  d["area"] = area;
  d["edges"] = tags;
  return d;
}

py::object bracketing(const std::vector<double>& lower, const std::vector<double>& upper,
                      const std::vector<double>& spectrum, bool singular) {
  const BoundsResult b =
      sort_bounds(lower, upper, singular ? BoundsMode::SingularShift : BoundsMode::Regular, 1, true);
  const SpectrumReport rep = verify_bracketing(b, Spectrum{spectrum});
  py::dict d;
  d["pass"] = rep.pass;
  d["failures"] = rep.failures;
  d["lower_sorted"] = b.lower_sorted;
  d["upper_sorted"] = b.upper_sorted;
  d["min_lower_margin"] = rep.min_lower_margin;
  d["min_upper_margin"] = rep.min_upper_margin;
  return std::move(d);
}

}  // namespace

PYBIND11_MODULE(_eigenbound, m) {
  m.doc() = "Guaranteed two-sided eigenvalue bounds for preconditioned FE pencils";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<LookupError>(m, "LookupError", base);
  py::register_exception<ParameterError>(m, "ParameterError", base);
  py::register_exception<ContractError>(m, "ContractError", base);
  py::register_exception<DefinitenessError>(m, "DefinitenessError", base);

  m.def("cases", [] {
    py::list out;
    for (const CaseInfo& c : case_registry()) {
      py::dict d;
      d["id"] = c.id;
      d["description"] = c.description;
      d["physics"] = c.physics == Physics::Elasticity ? "elasticity" : "diffusion";
      d["default_n"] = c.default_n;
      d["preconditioners"] = c.preconditioners;
      d["default_preconditioner"] = c.default_preconditioner;
      d["singular"] = c.singular;
      d["has_pcg"] = c.has_pcg;
      out.append(d);
    }
    return out;
  });
  m.def("run_case", &run_case_py, py::arg("case_id"), py::arg("n") = py::none(), py::arg("precond") = py::none(),
        py::arg("mesh") = py::none(), py::arg("seed") = 0, py::arg("run_pcg") = true, py::arg("out") = py::none(),
        "Run a bundled case and return its report; with out, also write the CSV/JSON files there.");
  m.def(
      "gen_eig_small",
      [](const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
        return gen_eig_small(DenseSymMatrix::from_rows(a), DenseSymMatrix::from_rows(b)).values;
      },
      py::arg("a"), py::arg("b"), "Ascending eigenvalues of the pencil (a, b), b positive definite.");
  m.def(
      "voigt_isotropic",
      [](double young, double poisson, int d) { return to_rows(voigt_isotropic(young, poisson, d)); },
      py::arg("young"), py::arg("poisson"), py::arg("d") = 2);
  m.def("mesh_info", &mesh_info, py::arg("path"));
  m.def("verify_bracketing", &bracketing, py::arg("lower"), py::arg("upper"), py::arg("spectrum"),
        py::arg("singular") = false);
  m.def(
      "property_suite", [](std::uint64_t seed, std::size_t count) { return to_python(to_json(run_property_suite(seed, count))); },
      py::arg("seed") = 0, py::arg("count") = 50);
  m.def(
      "small_agreement",
      [](std::uint64_t seed, std::size_t count) { return to_python(to_json(run_small_agreement(seed, count))); },
      py::arg("seed") = 0, py::arg("count") = 1000);
}
