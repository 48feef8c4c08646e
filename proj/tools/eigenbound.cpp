// eigenbound: run the bundled cases, all of them, or inspect a mesh file.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage or input error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "eigenbound/cases.hpp"
#include "eigenbound/errors.hpp"
#include "eigenbound/properties.hpp"

namespace fs = std::filesystem;
using namespace eigenbound;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

fs::path default_out() {
  if (const char* env = std::getenv("EIGENBOUND_OUT"); env && *env) return env;
  return "eigenbound_out";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_case_line(const CaseResult& r, double secs) {
  std::cout << (r.pass() ? "PASS " : "FAIL ") << r.stem() << "  order=" << r.order
            << "  bracketed=" << r.report.entries.size() - r.report.failures.size() << "/" << r.report.entries.size();
  if (r.residual) std::cout << "  residual=" << *r.residual;
  if (r.pcg) std::cout << "  pcg=" << r.pcg->iterations;
  if (!r.bounds.certified) std::cout << "  (not certified)";
  std::cout << "  " << std::fixed << std::setprecision(1) << secs << "s" << std::defaultfloat << std::setprecision(6)
            << '\n';
}

int cmd_run(const CaseConfig& cfg, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const CaseResult r = run_case(cfg);
  write_case_outputs(r, out);
  print_case_line(r, seconds_since(t0));
  for (std::size_t k : r.report.failures) std::cout << "  violated at k=" << k << '\n';
  return r.pass() ? kPass : kFail;
}

int cmd_run_all(const fs::path& out, std::uint64_t seed) {
  using nlohmann::ordered_json;
  bool ok = true;
  ordered_json summary;
  summary["seed"] = seed;
  auto& cases = summary["cases"] = ordered_json::array();
  auto& table = summary["pcg_table"] = ordered_json::array();
  for (CaseConfig cfg : bundled_configs()) {
    cfg.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    const CaseResult r = run_case(cfg);
    write_case_outputs(r, out);
    print_case_line(r, seconds_since(t0));
    ok = ok && r.pass();
    cases.push_back({{"stem", r.stem()},
                     {"pass", r.pass()},
                     {"certified", r.bounds.certified},
                     {"mode", r.bounds.mode == BoundsMode::SingularShift ? "SINGULAR_SHIFT" : "REGULAR"},
                     {"order", r.order},
                     {"min_lower_margin", r.report.min_lower_margin},
                     {"min_upper_margin", r.report.min_upper_margin}});
    if (r.pcg) {
      const auto ref = reference_pcg_iterations(r.config);
      ordered_json row{{"stem", r.stem()}, {"iterations", r.pcg->iterations}, {"converged", r.pcg->converged}};
      row["reference_iterations"] = ref ? ordered_json(*ref) : ordered_json(nullptr);
      if (ref) {
        const auto diff = static_cast<long>(r.pcg->iterations) - static_cast<long>(*ref);
        row["within_2"] = diff >= -2 && diff <= 2;
      }
      table.push_back(row);
    }
  }

  auto t0 = std::chrono::steady_clock::now();
  const PropertySuiteResult props = run_property_suite(seed, 50);
  std::cout << (props.pass ? "PASS " : "FAIL ") << "property suite (50 trials, seed " << seed << ")  "
            << std::fixed << std::setprecision(1) << seconds_since(t0) << "s" << std::defaultfloat << '\n';
  t0 = std::chrono::steady_clock::now();
  const SmallAgreementResult agree = run_small_agreement(seed, 1000);
  std::cout << (agree.pass ? "PASS " : "FAIL ") << "small vs dense solver (1000 pencils)  max deviation "
            << agree.max_deviation << '\n';
  ok = ok && props.pass && agree.pass;
  summary["property_suite"] = to_json(props);
  summary["small_vs_dense"] = to_json(agree);
  summary["pass"] = ok;

  fs::create_directories(out);
  std::ofstream f(out / "summary.json");
  f << summary.dump(2) << '\n';
  std::cout << (ok ? "all checks passed" : "some checks FAILED") << "; reports in " << out.string() << '\n';
  return ok ? kPass : kFail;
}

int cmd_mesh_info(const std::string& file) {
  const Mesh mesh = read_mesh_file(file);
  std::size_t tris = 0;
  double area = 0.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    if (mesh.elements()[e].shape == ElementShape::Tri3) ++tris;
    area += mesh.element_area(e);
  }
  std::map<std::string, std::size_t> tags;
  for (const auto& b : mesh.boundary_edges()) ++tags[std::string(to_string(b.tag))];
  std::size_t min_patch = mesh.dof_count() ? SIZE_MAX : 0;
  std::size_t max_patch = 0;
  for (std::size_t k = 0; k < mesh.dof_count(); ++k) {
    min_patch = std::min(min_patch, mesh.patch(k).size());
    max_patch = std::max(max_patch, mesh.patch(k).size());
  }
  const Rectangle box = mesh.bounding_box();
  std::cout << "vertices: " << mesh.vertex_count() << '\n'
            << "elements: " << mesh.element_count() << " (tri " << tris << ", quad " << mesh.element_count() - tris
            << ")\n"
            << "dofs: " << mesh.dof_count() << '\n'
            << "periodic pairs: " << mesh.periodic_pairs().size() << '\n'
            << "bounding box: [" << box.x0 << ", " << box.x1 << "] x [" << box.y0 << ", " << box.y1 << "]\n"
            << "area: " << std::setprecision(15) << area << std::setprecision(6) << '\n'
            << "patch sizes: " << min_patch << ".." << max_patch << '\n';
  for (const auto& [tag, count] : tags) std::cout << "edges " << tag << ": " << count << '\n';
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guaranteed two-sided eigenvalue bounds for preconditioned FE pencils"};
  app.require_subcommand(1);

  CaseConfig cfg;
  std::size_t n = 0;
  std::string precond;
  std::string mesh_file;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool no_pcg = false;
  auto* run = app.add_subcommand("run", "Run one bundled case");
  run->add_option("case", cfg.case_id, "Case id (ex41a, ex41b, ex41c, ex45, ex46, diag21)")->required();
  auto* n_opt = run->add_option("--n", n, "Subdivisions per axis");
  auto* p_opt = run->add_option("--precond", precond, "Preconditioner id");
  auto* m_opt = run->add_option("--mesh", mesh_file, "Mesh file for file-based cases");
  run->add_option("--out", out_dir, "Output directory (default $EIGENBOUND_OUT or ./eigenbound_out)");
  run->add_option("--seed", seed, "Seed recorded in the report");
  run->add_flag("--no-pcg", no_pcg, "Skip the CG run");

  auto* all = app.add_subcommand("run-all", "Run every bundled case and the randomized suites");
  all->add_option("--out", out_dir, "Output directory (default $EIGENBOUND_OUT or ./eigenbound_out)");
  all->add_option("--seed", seed, "Seed of the randomized suites");

  std::string info_file;
  auto* info = app.add_subcommand("mesh-info", "Summarize a mesh file");
  info->add_option("file", info_file, "Mesh file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  const fs::path out = out_dir.empty() ? default_out() : fs::path(out_dir);
  try {
    if (*run) {
      if (*n_opt) cfg.n = n;
      if (*p_opt) cfg.preconditioner = precond;
      if (*m_opt) cfg.mesh_file = mesh_file;
      cfg.seed = seed;
      cfg.run_pcg = !no_pcg;
      return cmd_run(cfg, out);
    }
    if (*all) return cmd_run_all(out, seed);
    return cmd_mesh_info(info_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
