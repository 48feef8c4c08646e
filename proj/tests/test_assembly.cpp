#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "eigenbound/assembly.hpp"
#include "eigenbound/errors.hpp"
#include "eigenbound/smalleig.hpp"

using namespace eigenbound;

namespace {

// Q1 Laplacian element matrix on a square cell (any size), local order
// (0,0) (1,0) (1,1) (0,1).
constexpr double kQ1[4][4] = {{4, -1, -2, -1}, {-1, 4, -1, -2}, {-2, -1, 4, -1}, {-1, -2, -1, 4}};

// Independent scatter of the Q1 Laplacian on an n x n Dirichlet grid.
DenseSymMatrix reference_q1_laplacian(std::size_t n) {
  auto dof = [n](std::size_t i, std::size_t j) -> long {
    if (i == 0 || j == 0 || i == n || j == n) return -1;
    return static_cast<long>((j - 1) * (n - 1) + (i - 1));
  };
  DenseSymMatrix k((n - 1) * (n - 1));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const long d[4] = {dof(i, j), dof(i + 1, j), dof(i + 1, j + 1), dof(i, j + 1)};
      for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b)
          if (d[a] >= 0 && d[b] >= 0)
            k.add(static_cast<std::size_t>(std::min(d[a], d[b])), static_cast<std::size_t>(std::max(d[a], d[b])),
                  kQ1[a][b] / 6.0);
    }
  return k;
}

MaterialTensorField identity2() { return MaterialTensorField::constant(DenseSymMatrix::identity(2)); }

}  // namespace

TEST(Diffusion, Q1LaplacianMatchesReference) {
  const std::size_t n = 5;
  const Mesh m = build_uniform_quad_mesh({0, 2, 0, 2}, n, SideTags::all(BoundaryTag::Dirichlet));
  const auto a = assemble_diffusion(m, identity2());
  const auto ref = reference_q1_laplacian(n);
  EXPECT_EQ(a.to_dense().order(), ref.order());
  for (std::size_t i = 0; i < ref.order(); ++i)
    for (std::size_t j = 0; j < ref.order(); ++j) EXPECT_NEAR(a.coeff(i, j), ref(i, j), 1e-14);
  EXPECT_NEAR(a.coeff(6, 6), 8.0 / 3.0, 1e-14);
  EXPECT_EQ(a.asymmetry(), 0.0);
}

TEST(Diffusion, IdenticalFieldsGiveIdenticalMatrices) {
  const Mesh m = build_uniform_quad_mesh({-std::numbers::pi, std::numbers::pi, -std::numbers::pi, std::numbers::pi}, 6,
                                         SideTags::all(BoundaryTag::Dirichlet));
  const auto f = example_field("ex41-A");
  const auto a = assemble_diffusion(m, f);
  const auto b = assemble_diffusion(m, f);
  ASSERT_EQ(a.nonzeros(), b.nonzeros());
  for (std::size_t i = 0; i < a.nonzeros(); ++i) EXPECT_EQ(a.values()[i], b.values()[i]);
}

TEST(Diffusion, PeriodicAnnihilatesConstants) {
  const Mesh m = build_uniform_quad_mesh({0, 1, 0, 1}, 6, SideTags::all(BoundaryTag::Periodic));
  const auto a = assemble_diffusion(m, example_field("ex41-A"));
  const std::vector<double> ones(m.dof_count(), 1.0);
  for (double v : a * ones) EXPECT_NEAR(v, 0.0, 1e-13);
  EXPECT_EQ(a.asymmetry(), 0.0);
}

TEST(Diffusion, NeumannAnnihilatesConstants) {
  const Mesh m = build_uniform_quad_mesh({0, 1, 0, 3}, 4, SideTags::all(BoundaryTag::Neumann));
  const auto a = assemble_diffusion(m, identity2());
  const std::vector<double> ones(m.dof_count(), 1.0);
  for (double v : a * ones) EXPECT_NEAR(v, 0.0, 1e-13);
}

TEST(Diffusion, P1TriangleStiffness) {
  // Right triangle (0,0) (1,0) (0,1): grad phi = (-1,-1), (1,0), (0,1), area 1/2.
  std::vector<Point> v{{0, 0}, {1, 0}, {0, 1}};
  std::vector<Element> e{{ElementShape::Tri3, {0, 1, 2, 0}}};
  std::vector<BoundaryEdge> b{{0, 0, BoundaryTag::Neumann}, {0, 1, BoundaryTag::Neumann}, {0, 2, BoundaryTag::Neumann}};
  const Mesh m(v, e, b);
  const auto a = assemble_diffusion(m, MaterialTensorField::constant(DenseSymMatrix::from_rows({{2.0, 0.5}, {0.5, 1.0}})));
  // K_ij = area * g_i^T A g_j
  const double g[3][2] = {{-1, -1}, {1, 0}, {0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double ag0 = 2.0 * g[j][0] + 0.5 * g[j][1];
      const double ag1 = 0.5 * g[j][0] + 1.0 * g[j][1];
      EXPECT_NEAR(a.coeff(i, j), 0.5 * (g[i][0] * ag0 + g[i][1] * ag1), 1e-15);
    }
}

TEST(Diffusion, RobinEdgeMass) {
  // Robin term with g3 = 3 on the right side of a 1 x 2 grid: edge mass 3 * L * [[1/3,1/6],[1/6,1/3]].
  const Mesh m = build_uniform_quad_mesh({0, 2, 0, 2}, 2,
                                         {BoundaryTag::Dirichlet, BoundaryTag::Robin, BoundaryTag::Dirichlet,
                                          BoundaryTag::Dirichlet});
  const auto with = assemble_diffusion(m, identity2(), RobinCoefficientField::constant(3.0));
  const auto without = assemble_diffusion(m, identity2());
  // Free DOFs: the center (1,1) and the right midpoint (2,1); the Robin edges
  // adjacent to (2,1) have length 1 each.
  const auto right = static_cast<std::size_t>(m.dof(1 * 3 + 2));
  const auto center = static_cast<std::size_t>(m.dof(1 * 3 + 1));
  EXPECT_NEAR(with.coeff(right, right) - without.coeff(right, right), 2.0 * 3.0 / 3.0, 1e-14);
  EXPECT_NEAR(with.coeff(center, right) - without.coeff(center, right), 0.0, 1e-15);
}

TEST(Diffusion, FieldShapeChecks) {
  const Mesh m = build_uniform_quad_mesh({0, 1, 0, 1}, 2, SideTags::all(BoundaryTag::Dirichlet));
  EXPECT_THROW(assemble_diffusion(m, example_field("ex45-Ctilde1")), ContractError);
  EXPECT_THROW(assemble_diffusion(m, MaterialTensorField::element_constant({DenseSymMatrix::identity(2)})),
               ContractError);
}

TEST(Load, UnitSourceGivesCellArea) {
  const std::size_t n = 8;
  const double h = 2.0 / n;
  const Mesh m = build_uniform_quad_mesh({0, 2, 0, 2}, n, SideTags::all(BoundaryTag::Dirichlet));
  const auto b = assemble_load(m, [](Point) { return 1.0; });
  for (double v : b) EXPECT_NEAR(v, h * h, 1e-15);
  const auto bv = assemble_vector_load(m, [](Point) { return std::array<double, 2>{1.0, 0.0}; });
  ASSERT_EQ(bv.size(), 2 * m.dof_count());
  for (std::size_t k = 0; k < m.dof_count(); ++k) {
    EXPECT_NEAR(bv[k], h * h, 1e-15);
    EXPECT_EQ(bv[m.dof_count() + k], 0.0);
  }
}

TEST(Elasticity, SingleInteriorVertex) {
  // One free vertex: for Q1, int phi_x^2 = int phi_y^2 = 4/3 and int phi_x phi_y = 0,
  // so K = (c11 + c33) 4/3 I.
  const Mesh m = build_uniform_quad_mesh({0, 1, 0, 1}, 2, SideTags::all(BoundaryTag::Dirichlet));
  for (double nu : {0.0, 0.2}) {
    const DenseSymMatrix c = voigt_isotropic(1.0, nu, 2);
    const auto k = assemble_elasticity_2d(m, MaterialTensorField::constant(c, true));
    ASSERT_EQ(k.order(), 2u);
    const double diag = (c(0, 0) + c(2, 2)) * 4.0 / 3.0;
    EXPECT_NEAR(k.coeff(0, 0), diag, 1e-14);
    EXPECT_NEAR(k.coeff(1, 1), diag, 1e-14);
    EXPECT_NEAR(k.coeff(0, 1), 0.0, 1e-15);
  }
}

TEST(Elasticity, ComponentMajorBlocksAndSymmetry) {
  const Mesh m = build_uniform_quad_mesh({-1, 1, -1, 1}, 6, SideTags::all(BoundaryTag::Dirichlet));
  const auto k = assemble_elasticity_2d(m, example_field("ex45-C"));
  const std::size_t n = m.dof_count();
  EXPECT_EQ(k.order(), 2 * n);
  EXPECT_EQ(k.asymmetry(), 0.0);
  for (std::size_t i = 0; i < 2 * n; ++i) EXPECT_GT(k.coeff(i, i), 0.0);
  EXPECT_NO_THROW(CholeskyFactor(k.to_dense()));
}

TEST(Elasticity, OnlyDirichlet) {
  const Mesh m = build_uniform_quad_mesh({0, 1, 0, 1}, 2,
                                         {BoundaryTag::Dirichlet, BoundaryTag::Neumann, BoundaryTag::Dirichlet,
                                          BoundaryTag::Dirichlet});
  EXPECT_THROW(assemble_elasticity_2d(m, example_field("ex45-Ctilde1")), UnsupportedError);
  const Mesh d = build_uniform_quad_mesh({0, 1, 0, 1}, 2, SideTags::all(BoundaryTag::Dirichlet));
  EXPECT_THROW(assemble_elasticity_2d(d, example_field("ex41-Atilde1")), ContractError);
}
