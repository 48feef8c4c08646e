#pragma once

// Bundled example cases: construction, runs against the oracle and PCG,
// and the CSV/JSON reports written for them.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eigenbound/bounds.hpp"
#include "eigenbound/pcg.hpp"
#include "eigenbound/problem.hpp"
#include "json.hpp"

namespace eigenbound {

struct CaseInfo {
  std::string id;
  std::string description;
  Physics physics = Physics::Diffusion;
  /// 0 when the case reads a mesh file instead of a uniform grid.
  std::size_t default_n = 0;
  std::vector<std::string> preconditioners;
  std::string default_preconditioner;
  bool singular = false;
  bool has_pcg = false;
};

const std::vector<CaseInfo>& case_registry();
/// Throws LookupError for unknown ids.
const CaseInfo& find_case(const std::string& id);

struct CaseConfig {
  std::string case_id;
  std::optional<std::size_t> n;
  std::optional<std::string> preconditioner;
  std::optional<std::string> mesh_file;
  std::uint64_t seed = 0;
  bool run_pcg = true;
  bool want_residual = true;
};

/// Fills in defaults and rejects options the case does not take.
CaseConfig resolve_config(const CaseConfig& config);
Problem build_problem(const CaseConfig& config);
std::string default_mesh_path(const std::string& case_id);

/// Iteration counts reported in the literature for the CG runs, if any.
std::optional<std::size_t> reference_pcg_iterations(const CaseConfig& config);

struct RobinSummary {
  std::size_t robin_elements = 0;
  double ratio_lo = 1.0;
  double ratio_hi = 1.0;
};

struct CaseResult {
  CaseConfig config;  // resolved
  std::size_t dofs = 0;
  std::size_t order = 0;
  BoundsResult bounds;
  Spectrum spectrum;
  SpectrumReport report;
  std::optional<double> residual;
  std::optional<PCGReport> pcg;
  std::optional<RobinSummary> robin;

  bool residual_ok() const { return !residual || *residual <= 1e-8; }
  bool pass() const { return report.pass && residual_ok(); }
  /// Stem for report files, e.g. "ex41a_n11_Atilde2".
  std::string stem() const;
};

CaseResult run_case(const CaseConfig& config);

void write_bounds_csv(std::ostream& out, const BoundsResult& bounds, const Spectrum* spectrum);
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
void write_pcg_csv(std::ostream& out, const PCGReport& pcg);
nlohmann::ordered_json case_report_json(const CaseResult& result);
/// Writes <stem>_bounds.csv, <stem>_spectrum.csv, <stem>_report.json and,
/// when PCG ran, <stem>_pcg.csv into dir. Returns the written paths.
std::vector<std::filesystem::path> write_case_outputs(const CaseResult& result, const std::filesystem::path& dir);

/// The configurations exercised by run-all.
std::vector<CaseConfig> bundled_configs();

}  // namespace eigenbound
