#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eigenbound/cases.hpp"
#include "eigenbound/errors.hpp"
#include "eigenbound/properties.hpp"

using namespace eigenbound;
namespace fs = std::filesystem;

namespace {

CaseConfig config(const std::string& id, std::optional<std::size_t> n = std::nullopt,
                  std::optional<std::string> precond = std::nullopt) {
  CaseConfig c;
  c.case_id = id;
  c.n = n;
  c.preconditioner = precond;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Registry, KnownCases) {
  for (const char* id : {"ex41a", "ex41b", "ex41c", "ex45", "ex46", "diag21"}) EXPECT_NO_THROW(find_case(id));
  EXPECT_THROW(find_case("ex99"), LookupError);
}

TEST(Config, DefaultsAndRejections) {
  const auto c = resolve_config(config("ex41a"));
  EXPECT_EQ(c.n, 11u);
  EXPECT_EQ(c.preconditioner, "Atilde2");
  EXPECT_THROW(resolve_config(config("ex41a", 11, "Ctilde1")), ParameterError);
  EXPECT_THROW(resolve_config(config("ex41c", 5)), ParameterError);
  EXPECT_THROW(resolve_config(config("nope")), LookupError);
  EXPECT_FALSE(resolve_config(config("ex41b")).run_pcg);
  EXPECT_EQ(reference_pcg_iterations(config("ex41a", 31, "Atilde1")), 20u);
  EXPECT_EQ(reference_pcg_iterations(config("ex45", 22, "Ctilde2")), 11u);
  EXPECT_FALSE(reference_pcg_iterations(config("ex46")));
}

TEST(RunCase, Ex41aSmall) {
  const auto r = run_case(config("ex41a", 11, "Atilde2"));
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.dofs, 100u);
  EXPECT_EQ(r.report.entries.size(), 100u);
  ASSERT_TRUE(r.pcg);
  EXPECT_EQ(r.stem(), "ex41a_n11_Atilde2");

  std::ostringstream csv;
  write_bounds_csv(csv, r.bounds, &r.spectrum);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "k,lambda_L,lambda_U,lambda");
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 100u);
}

TEST(RunCase, PeriodicReportsShiftedMode) {
  const auto r = run_case(config("ex41b", 9));
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.bounds.mode, BoundsMode::SingularShift);
  EXPECT_EQ(r.report.entries.size(), r.dofs - 1);
  EXPECT_FALSE(r.pcg);
  const auto j = case_report_json(r);
  EXPECT_EQ(j["mode"], "SINGULAR_SHIFT");
  EXPECT_EQ(j["checked_indices"], 80u);
}

TEST(RunCase, RobinFixture) {
  const auto r = run_case(config("ex41c", std::nullopt, "Atilde1"));
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.dofs, 400u);
  ASSERT_TRUE(r.robin);
  EXPECT_EQ(r.robin->ratio_lo, 1.0);
  EXPECT_EQ(r.robin->ratio_hi, 1.0);
}

TEST(RunCase, OutputsAreDeterministic) {
  const fs::path base = fs::temp_directory_path() / "eigenbound_case_test";
  fs::remove_all(base);
  auto cfg = config("ex46", 6);
  cfg.seed = 7;
  const auto first = write_case_outputs(run_case(cfg), base / "a");
  const auto second = write_case_outputs(run_case(cfg), base / "b");
  ASSERT_EQ(first.size(), 4u);
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].filename(), second[i].filename());
    EXPECT_EQ(slurp(first[i]), slurp(second[i])) << first[i];
  }
  const std::string pcg = slurp(base / "a" / "ex46_n6_I_pcg.csv");
  EXPECT_EQ(pcg.rfind("iter,relative_energy_error\n0,1\n", 0), 0u);
  fs::remove_all(base);
}

TEST(PropertySuite, SeedReproducible) {
  const auto a = run_property_suite(7, 6);
  const auto b = run_property_suite(7, 6);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_TRUE(a.pass);
  const auto c = run_property_suite(8, 6);
  EXPECT_NE(to_json(a).dump(), to_json(c).dump());
}

TEST(SmallAgreement, Passes) {
  const auto r = run_small_agreement(1, 200);
  EXPECT_EQ(r.pencils, 200u);
  EXPECT_TRUE(r.pass) << r.max_deviation;
}
