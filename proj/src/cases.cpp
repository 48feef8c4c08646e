#include "eigenbound/cases.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "eigenbound/assembly.hpp"
#include "eigenbound/errors.hpp"

namespace eigenbound {

namespace {

constexpr double kPi = std::numbers::pi;

Rectangle pi_square() { return {-kPi, kPi, -kPi, kPi}; }

std::string field_for(const std::string& case_id, const std::string& precond) {
  if (precond == "I") return "ex46-I";
  if (case_id == "ex45") return "ex45-" + precond;
  return "ex41-" + precond;
}

std::string mode_name(BoundsMode m) { return m == BoundsMode::SingularShift ? "SINGULAR_SHIFT" : "REGULAR"; }

std::string physics_name(Physics p) { return p == Physics::Elasticity ? "elasticity" : "diffusion"; }

}  // namespace

const std::vector<CaseInfo>& case_registry() {
  static const std::vector<CaseInfo> cases = {
      {"ex41a", "diffusion on (-pi,pi)^2, Q1, all sides Dirichlet", Physics::Diffusion, 11,
       {"Atilde1", "Atilde2"}, "Atilde2", false, true},
      {"ex41b", "diffusion on (-pi,pi)^2, Q1, fully periodic", Physics::Diffusion, 21,
       {"Atilde1", "Atilde2"}, "Atilde2", true, false},
      {"ex41c", "diffusion on a nonuniform P1 mesh, Robin right side with g3 = 1 + x2^2", Physics::Diffusion, 0,
       {"Atilde1", "Atilde2"}, "Atilde2", false, true},
      {"ex45", "plane elasticity on (-pi,pi)^2, E = 1 + 0.3 sign(x1 x2), nu = 0.2", Physics::Elasticity, 22,
       {"Ctilde1", "Ctilde2"}, "Ctilde2", false, true},
      {"ex46", "diffusion with A = sin(x1 + x2) I on (0,1)^2", Physics::Diffusion, 10, {"I"}, "I", false, true},
      {"diag21", "diffusion with A = diag(2,1) on (0,1)^2", Physics::Diffusion, 31, {"I"}, "I", false, true},
  };
  return cases;
}

const CaseInfo& find_case(const std::string& id) {
  for (const auto& c : case_registry())
    if (c.id == id) return c;
  throw LookupError("unknown case '" + id + "'");
}

std::string default_mesh_path(const std::string& case_id) {
  const char* env = std::getenv("EIGENBOUND_DATA_DIR");
  const std::string dir = env && *env ? env : EIGENBOUND_DATA_DIR;
  return dir + "/" + case_id + ".mesh";
}

CaseConfig resolve_config(const CaseConfig& config) {
  const CaseInfo& info = find_case(config.case_id);
  CaseConfig out = config;
  if (info.default_n == 0) {
    if (out.n) throw ParameterError("case " + info.id + " reads a mesh file and takes no --n");
    if (!out.mesh_file) out.mesh_file = default_mesh_path(info.id);
  } else {
    if (out.mesh_file) throw ParameterError("case " + info.id + " uses a uniform grid and takes no --mesh");
    if (!out.n) out.n = info.default_n;
    if (*out.n < 1) throw ParameterError("--n must be at least 1");
  }
  if (!out.preconditioner) out.preconditioner = info.default_preconditioner;
  if (std::find(info.preconditioners.begin(), info.preconditioners.end(), *out.preconditioner) ==
      info.preconditioners.end())
    throw ParameterError("case " + info.id + " has no preconditioner '" + *out.preconditioner + "'");
  if (!info.has_pcg) out.run_pcg = false;
  return out;
}

Problem build_problem(const CaseConfig& raw) {
  const CaseConfig cfg = resolve_config(raw);
  const CaseInfo& info = find_case(cfg.case_id);
  const MaterialTensorField at = example_field(field_for(info.id, *cfg.preconditioner));
  if (info.id == "ex41a")
    return {Physics::Diffusion, build_uniform_quad_mesh(pi_square(), *cfg.n, SideTags::all(BoundaryTag::Dirichlet)),
            example_field("ex41-A"), at};
  if (info.id == "ex41b")
    return {Physics::Diffusion, build_uniform_quad_mesh(pi_square(), *cfg.n, SideTags::all(BoundaryTag::Periodic)),
            example_field("ex41-A"), at, {}, {}, true};
  if (info.id == "ex41c") {
    const RobinCoefficientField g = example_robin_field("ex41c-g3");
    return {Physics::Diffusion, read_mesh_file(*cfg.mesh_file), example_field("ex41-A"), at, g, g};
  }
  if (info.id == "ex45")
    return {Physics::Elasticity, build_uniform_quad_mesh(pi_square(), *cfg.n, SideTags::all(BoundaryTag::Dirichlet)),
            example_field("ex45-C"), at};
  const Rectangle unit{0.0, 1.0, 0.0, 1.0};
  const Mesh mesh = build_uniform_quad_mesh(unit, *cfg.n, SideTags::all(BoundaryTag::Dirichlet));
  if (info.id == "ex46") return {Physics::Diffusion, mesh, example_field("ex46-A"), at};
  return {Physics::Diffusion, mesh, example_field("diag21-A"), at};
}

std::optional<std::size_t> reference_pcg_iterations(const CaseConfig& raw) {
  const CaseConfig cfg = resolve_config(raw);
  const std::string& p = *cfg.preconditioner;
  if (cfg.case_id == "ex41a" && cfg.n == 11u) return p == "Atilde1" ? 17 : 13;
  if (cfg.case_id == "ex41a" && cfg.n == 31u) return p == "Atilde1" ? 20 : 15;
  if (cfg.case_id == "ex45" && cfg.n == 22u) return p == "Ctilde1" ? 14 : 11;
  return std::nullopt;
}

std::string CaseResult::stem() const {
  std::string s = config.case_id;
  if (config.n) s += "_n" + std::to_string(*config.n);
  if (config.preconditioner) s += "_" + *config.preconditioner;
  return s;
}

CaseResult run_case(const CaseConfig& raw) {
  CaseResult res;
  res.config = resolve_config(raw);
  const Problem problem = build_problem(res.config);
  res.dofs = problem.mesh.dof_count();
  res.order = problem.order();
  res.bounds = problem_bounds(problem);

  const Pencil pencil = assemble_pencil(problem);
  const EigenDecomposition eig = solve_oracle(problem, pencil, res.config.want_residual);
  res.spectrum.values = eig.values;
  res.report = verify_bracketing(res.bounds, res.spectrum);
  if (res.config.want_residual)
    res.residual = res.order == 0 ? 0.0 : max_relative_residual(pencil.a.to_dense(), pencil.at.to_dense(), eig);

  if (problem.mesh.has_tag(BoundaryTag::Robin)) {
    RobinSummary rs{0, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& be : problem.mesh.boundary_edges()) {
      if (be.tag != BoundaryTag::Robin) continue;
      const auto r = robin_ratio_extremes(problem.g3, problem.g3t, problem.mesh, be);
      if (!r) continue;
      ++rs.robin_elements;
      rs.ratio_lo = std::min(rs.ratio_lo, r->lo);
      rs.ratio_hi = std::max(rs.ratio_hi, r->hi);
    }
    if (rs.robin_elements > 0) res.robin = rs;
  }

  if (res.config.run_pcg) {
    const LoadVector b = problem.physics == Physics::Elasticity
                             ? assemble_vector_load(problem.mesh, [](Point) { return std::array<double, 2>{1.0, 0.0}; })
                             : assemble_load(problem.mesh, [](Point) { return 1.0; });
    res.pcg = pcg_solve(pencil.a, pencil.at, b, 1e-9);
  }
  return res;
}

void write_bounds_csv(std::ostream& out, const BoundsResult& bounds, const Spectrum* spectrum) {
  const bool shifted = bounds.mode == BoundsMode::SingularShift;
  out << "k,lambda_L,lambda_U" << (spectrum ? ",lambda" : "") << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    out << i + 1 << ',' << bounds.lower_sorted[i] << ',' << bounds.upper_sorted[i];
    if (spectrum) {
      // The deflated spectrum starts at k = 2; the kernel eigenvalue is 0.
      out << ',';
      if (shifted)
        out << (i == 0 ? 0.0 : spectrum->values[i - 1]);
      else
        out << spectrum->values[i];
    }
    out << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  out << "k,lambda\n" << std::setprecision(17);
  for (std::size_t i = 0; i < spectrum.values.size(); ++i) out << i + 1 << ',' << spectrum.values[i] << '\n';
}

void write_pcg_csv(std::ostream& out, const PCGReport& pcg) {
  out << "iter,relative_energy_error\n" << std::setprecision(17);
  for (std::size_t i = 0; i < pcg.energy_error_history.size(); ++i)
    out << i << ',' << pcg.energy_error_history[i] << '\n';
}

nlohmann::ordered_json case_report_json(const CaseResult& r) {
  using nlohmann::ordered_json;
  const CaseInfo& info = find_case(r.config.case_id);
  ordered_json j;
  j["case"] = r.config.case_id;
  j["description"] = info.description;
  j["physics"] = physics_name(info.physics);
  if (r.config.n) j["n"] = *r.config.n;
  if (r.config.mesh_file) j["mesh"] = std::filesystem::path(*r.config.mesh_file).filename().string();
  j["preconditioner"] = *r.config.preconditioner;
  j["seed"] = r.config.seed;
  j["dofs"] = r.dofs;
  j["order"] = r.order;
  j["mode"] = mode_name(r.bounds.mode);
  j["replication"] = r.bounds.replication;
  j["certified"] = r.bounds.certified;
  j["pass"] = r.pass();
  j["bracketing_pass"] = r.report.pass;
  j["checked_indices"] = r.report.entries.size();
  j["violations"] = r.report.failures;
  j["min_lower_margin"] = r.report.min_lower_margin;
  j["min_upper_margin"] = r.report.min_upper_margin;
  if (!r.bounds.lower_sorted.empty()) {
    j["bounds"] = {{"lower_min", r.bounds.lower_sorted.front()},
                   {"lower_max", r.bounds.lower_sorted.back()},
                   {"upper_min", r.bounds.upper_sorted.front()},
                   {"upper_max", r.bounds.upper_sorted.back()}};
  }
  if (!r.spectrum.values.empty())
    j["spectrum"] = {{"min", r.spectrum.values.front()}, {"max", r.spectrum.values.back()}};
  if (r.residual) {
    j["oracle_residual"] = *r.residual;
    j["residual_pass"] = r.residual_ok();
  }
  if (r.robin)
    j["robin"] = {{"edges", r.robin->robin_elements}, {"ratio_lo", r.robin->ratio_lo}, {"ratio_hi", r.robin->ratio_hi}};
  if (r.pcg) {
    ordered_json p;
    p["iterations"] = r.pcg->iterations;
    p["converged"] = r.pcg->converged;
    p["final_relative_error"] = r.pcg->energy_error_history.back();
    if (auto ref = reference_pcg_iterations(r.config))
      p["reference_iterations"] = *ref;
    else
      p["reference_iterations"] = nullptr;
    j["pcg"] = p;
  }
  return j;
}

std::vector<std::filesystem::path> write_case_outputs(const CaseResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::string& suffix) {
    written.push_back(dir / (r.stem() + suffix));
    std::ofstream f(written.back());
    if (!f) throw Error("cannot write " + written.back().string());
    return f;
  };
  {
    auto f = open("_bounds.csv");
    write_bounds_csv(f, r.bounds, &r.spectrum);
  }
  {
    auto f = open("_spectrum.csv");
    write_spectrum_csv(f, r.spectrum);
  }
  if (r.pcg) {
    auto f = open("_pcg.csv");
    write_pcg_csv(f, *r.pcg);
  }
  {
    auto f = open("_report.json");
    f << case_report_json(r).dump(2) << '\n';
  }
  return written;
}

std::vector<CaseConfig> bundled_configs() {
  std::vector<CaseConfig> out;
  auto add = [&](const std::string& id, std::optional<std::size_t> n, const std::string& p) {
    CaseConfig c;
    c.case_id = id;
    c.n = n;
    c.preconditioner = p;
    out.push_back(c);
  };
  for (std::size_t n : {11u, 31u})
    for (const char* p : {"Atilde1", "Atilde2"}) add("ex41a", n, p);
  for (const char* p : {"Atilde1", "Atilde2"}) add("ex41b", 21, p);
  for (const char* p : {"Atilde1", "Atilde2"}) add("ex41c", std::nullopt, p);
  for (const char* p : {"Ctilde1", "Ctilde2"}) add("ex45", 22, p);
  for (std::size_t n : {10u, 20u}) add("ex46", n, "I");
  add("diag21", 31, "I");
  return out;
}

}  // namespace eigenbound
