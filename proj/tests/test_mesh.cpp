#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "eigenbound/errors.hpp"
#include "eigenbound/mesh.hpp"

using namespace eigenbound;

namespace {

constexpr double kPi = std::numbers::pi;

const Rectangle kPiSquare{-kPi, kPi, -kPi, kPi};

std::string fixture_path() { return std::string(EIGENBOUND_DATA_DIR) + "/ex41c.mesh"; }

const char* kSquare =
    "meshfmt 1 2\n"
    "v 0 0\nv 1 0\nv 1 1\nv 0 1\n"
    "e tri 0 1 2\ne tri 0 2 3\n"
    "b 0 0 DIRICHLET\nb 0 1 DIRICHLET\nb 1 1 DIRICHLET\nb 1 2 DIRICHLET\n";

Mesh parse(const std::string& text) {
  std::istringstream in(text);
  return read_tri_mesh(in);
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(UniformMesh, DirichletCounts) {
  const Mesh m = build_uniform_quad_mesh(kPiSquare, 11, SideTags::all(BoundaryTag::Dirichlet));
  EXPECT_EQ(m.vertex_count(), 144u);
  EXPECT_EQ(m.element_count(), 121u);
  EXPECT_EQ(m.dof_count(), 100u);
  const Mesh m31 = build_uniform_quad_mesh(kPiSquare, 31, SideTags::all(BoundaryTag::Dirichlet));
  EXPECT_EQ(m31.dof_count(), 900u);
}

TEST(UniformMesh, SingleCellHasNoFreeDofs) {
  const Mesh m = build_uniform_quad_mesh({0, 1, 0, 1}, 1, SideTags::all(BoundaryTag::Dirichlet));
  EXPECT_EQ(m.dof_count(), 0u);
}

TEST(UniformMesh, PeriodicIdentification) {
  const Mesh m = build_uniform_quad_mesh(kPiSquare, 21, SideTags::all(BoundaryTag::Periodic));
  EXPECT_EQ(m.dof_count(), 441u);
  EXPECT_TRUE(m.is_fully_periodic());
  // The four corners collapse onto one DOF.
  const std::size_t last = 21;
  EXPECT_EQ(m.dof(0), m.dof(last));
  EXPECT_EQ(m.dof(0), m.dof(last * 22));
  EXPECT_EQ(m.dof(0), m.dof(last * 22 + last));
  for (std::size_t k = 0; k < m.dof_count(); ++k) EXPECT_EQ(m.patch(k).size(), 4u);
}

TEST(UniformMesh, InvalidInput) {
  EXPECT_THROW(build_uniform_quad_mesh({0, 0, 0, 1}, 3, SideTags{}), GeometryError);
  EXPECT_THROW(build_uniform_quad_mesh({0, 1, 0, 1}, 0, SideTags{}), ParameterError);
  SideTags half;
  half.left = BoundaryTag::Periodic;
  EXPECT_THROW(build_uniform_quad_mesh({0, 1, 0, 1}, 3, half), Error);
}

TEST(UniformMesh, AreasSumToDomain) {
  const Mesh m = build_uniform_quad_mesh(kPiSquare, 13, SideTags::all(BoundaryTag::Dirichlet));
  double area = 0.0;
  for (std::size_t e = 0; e < m.element_count(); ++e) area += m.element_area(e);
  EXPECT_NEAR(area, 4.0 * kPi * kPi, 1e-12 * 4.0 * kPi * kPi);
}

TEST(UniformMesh, InteriorPatchIsVertexStar) {
  const std::size_t n = 6;
  const Mesh m = build_uniform_quad_mesh({0, 1, 0, 1}, n, SideTags::all(BoundaryTag::Dirichlet));
  // vertex (i, j) = (2, 3)
  const std::size_t v = 3 * (n + 1) + 2;
  const auto k = static_cast<std::size_t>(m.dof(v));
  const auto patch = patch_elements(m, k);
  const std::vector<std::size_t> expected{2 * n + 1, 2 * n + 2, 3 * n + 1, 3 * n + 2};
  EXPECT_EQ(patch, expected);
  EXPECT_THROW(patch_elements(m, m.dof_count()), IndexError);
}

TEST(UniformMesh, PatchesCoverElements) {
  const std::size_t n = 7;
  const Mesh m = build_uniform_quad_mesh({0, 2, 0, 1}, n, SideTags::all(BoundaryTag::Dirichlet));
  std::vector<std::size_t> hits(m.element_count(), 0);
  for (std::size_t k = 0; k < m.dof_count(); ++k)
    for (std::size_t e : m.patch(k)) ++hits[e];
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const bool touches_boundary = i == 0 || j == 0 || i + 1 == n || j + 1 == n;
      if (!touches_boundary) EXPECT_EQ(hits[j * n + i], 4u);
      EXPECT_GE(hits[j * n + i], 1u);
    }
}

TEST(Periodic, ResolutionIsIdempotent) {
  const std::vector<PeriodicPair> pairs{{3, 2}, {2, 1}, {5, 4}};
  const auto once = resolve_periodic(6, pairs);
  std::vector<PeriodicPair> again;
  for (std::size_t v = 0; v < once.size(); ++v)
    if (once[v] != v) again.push_back({v, once[v]});
  EXPECT_EQ(resolve_periodic(6, again), once);
  EXPECT_EQ(once[3], 1u);
  EXPECT_THROW(resolve_periodic(3, std::vector<PeriodicPair>{{0, 1}, {1, 0}}), Error);
}

TEST(ReadMesh, UnitSquareAllDirichlet) {
  const Mesh m = parse(kSquare);
  EXPECT_EQ(m.element_count(), 2u);
  EXPECT_EQ(m.dof_count(), 0u);
}

TEST(ReadMesh, DanglingVertex) {
  std::string text = kSquare;
  text.replace(text.find("e tri 0 2 3"), 11, "e tri 0 2 99");
  const std::string msg = parse_error(text);
  EXPECT_NE(msg.find("99"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 7"), std::string::npos) << msg;
}

TEST(ReadMesh, ClockwiseElement) {
  std::string text = kSquare;
  text.replace(text.find("e tri 0 2 3"), 11, "e tri 0 3 2");
  EXPECT_NE(parse_error(text).find("line 7"), std::string::npos);
}

TEST(ReadMesh, MalformedLines) {
  EXPECT_NE(parse_error("meshfmt 1 2\nv 0\n").find("line 2"), std::string::npos);
  EXPECT_NE(parse_error("meshfmt 2 2\n").find("line 1"), std::string::npos);
  EXPECT_NE(parse_error("meshfmt 1 2\nq 1 2\n").find("line 2"), std::string::npos);
  std::string text = kSquare;
  text += "b 0 0 SOMETHING\n";
  EXPECT_FALSE(parse_error(text).empty());
}

TEST(ReadMesh, UntaggedBoundaryIsRejected) {
  std::string text = kSquare;
  text.erase(text.find("b 1 2 DIRICHLET\n"));
  EXPECT_THROW(parse(text), Error);
}

TEST(ReadMesh, RoundTrip) {
  const Mesh m = build_uniform_quad_mesh({0, 1, 0, 2}, 3, {BoundaryTag::Dirichlet, BoundaryTag::Robin,
                                                           BoundaryTag::Neumann, BoundaryTag::Dirichlet});
  std::ostringstream out;
  write_mesh(out, m);
  const Mesh back = parse(out.str());
  EXPECT_EQ(back.dof_count(), m.dof_count());
  EXPECT_TRUE(std::equal(back.dof_map().begin(), back.dof_map().end(), m.dof_map().begin()));
  EXPECT_EQ(back.boundary_edges().size(), m.boundary_edges().size());
}

TEST(Fixture, RobinRightSideWith400Dofs) {
  const Mesh m = read_mesh_file(fixture_path());
  EXPECT_EQ(m.dof_count(), 400u);
  EXPECT_TRUE(m.has_tag(BoundaryTag::Robin));
  for (const auto& b : m.boundary_edges()) {
    const auto [v0, v1] = m.elements()[b.element].edge(b.local_edge);
    const bool right = std::abs(m.vertices()[v0].x - kPi) < 1e-12 && std::abs(m.vertices()[v1].x - kPi) < 1e-12;
    EXPECT_EQ(b.tag == BoundaryTag::Robin, right);
  }
}

TEST(Fixture, PatchesMatchIncidenceCount) {
  // Independent count straight from the file text.
  std::ifstream in(fixture_path());
  std::string line;
  std::vector<std::set<std::size_t>> incident;
  std::size_t element = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "v") incident.emplace_back();
    if (kw != "e") continue;
    std::string shape;
    ls >> shape;
    std::size_t v;
    while (ls >> v) incident[v].insert(element);
    ++element;
  }
  const Mesh m = read_mesh_file(fixture_path());
  std::size_t six = 0;
  for (std::size_t k = 0; k < m.dof_count(); ++k) {
    const auto patch = m.patch(k);
    const auto& expected = incident[m.dof_vertex(k)];
    EXPECT_EQ(std::set<std::size_t>(patch.begin(), patch.end()), expected);
    if (expected.size() == 6) ++six;
  }
  EXPECT_GT(six, 0u);
}
