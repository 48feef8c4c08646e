#include "eigenbound/assembly.hpp"

#include <cmath>

#include "eigenbound/errors.hpp"
#include "eigenbound/fe.hpp"

namespace eigenbound {

namespace {

using Triplet = SymmetricSparseMatrix::Triplet;

void check_field_covers(const Mesh& mesh, const MaterialTensorField& field) {
  if (field.kind() == MaterialTensorField::Kind::ElementConstant && field.element_values() != mesh.element_count())
    throw ContractError("element-constant field has " + std::to_string(field.element_values()) +
                        " values for a mesh of " + std::to_string(mesh.element_count()) + " elements");
}

void push_upper(std::vector<Triplet>& out, std::ptrdiff_t row, std::ptrdiff_t col, double v) {
  if (row < 0 || col < 0) return;
  const auto r = static_cast<std::size_t>(row);
  const auto c = static_cast<std::size_t>(col);
  if (r <= c) out.push_back({r, c, v});
}

}  // namespace

SymmetricSparseMatrix assemble_diffusion(const Mesh& mesh, const MaterialTensorField& field,
                                         const RobinCoefficientField& g3) {
  if (field.voigt() || field.size() != 2)
    throw ContractError("diffusion assembly needs a 2x2 tensor field on a 2-D mesh");
  check_field_covers(mesh, field);

  std::vector<Triplet> triplets;
  const auto elements = mesh.elements();
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const Element& el = elements[e];
    const std::size_t nv = el.vertex_count();
    std::array<std::array<double, 4>, 4> ke{};
    for (const auto& q : fe::element_quadrature(el.shape, field.discontinuous_on(mesh, e))) {
      const auto pd = fe::evaluate(mesh, el, q.ref);
      const DenseSymMatrix a = field.evaluate(e, pd.x);
      const double w = q.weight * pd.det_j;
      for (std::size_t i = 0; i < nv; ++i) {
        const double ax = a(0, 0) * pd.dx[i] + a(0, 1) * pd.dy[i];
        const double ay = a(1, 0) * pd.dx[i] + a(1, 1) * pd.dy[i];
        for (std::size_t j = 0; j < nv; ++j) ke[i][j] += w * (pd.dx[j] * ax + pd.dy[j] * ay);
      }
    }
    if (!g3.is_zero()) {
      for (std::size_t b : mesh.element_boundary(e)) {
        const BoundaryEdge& be = mesh.boundary_edges()[b];
        if (be.tag != BoundaryTag::Robin) continue;
        const std::size_t i0 = be.local_edge;
        const std::size_t i1 = (be.local_edge + 1) % nv;
        const Point pa = mesh.vertices()[el.vertices[i0]];
        const Point pb = mesh.vertices()[el.vertices[i1]];
        const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
        for (const auto& q : fe::edge_quadrature()) {
          const double t = q.ref.xi;
          const Point x{pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)};
          const double phi0 = 1.0 - t;
          const double phi1 = t;
          const double w = q.weight * len * g3.evaluate(x);
          ke[i0][i0] += w * phi0 * phi0;
          ke[i0][i1] += w * phi0 * phi1;
          ke[i1][i0] += w * phi1 * phi0;
          ke[i1][i1] += w * phi1 * phi1;
        }
      }
    }
    // Every (i, j) pair is offered; pairs whose DOFs coincide (periodic
    // images inside one element) all land on the diagonal.
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t j = 0; j < nv; ++j)
        push_upper(triplets, mesh.dof(el.vertices[i]), mesh.dof(el.vertices[j]), ke[i][j]);
  }
  return SymmetricSparseMatrix::from_upper_triplets(mesh.dof_count(), std::move(triplets));
}

SymmetricSparseMatrix assemble_elasticity_2d(const Mesh& mesh, const MaterialTensorField& field) {
  if (!field.voigt() || field.size() != 3) throw ContractError("2-D elasticity assembly needs a 3x3 Voigt field");
  check_field_covers(mesh, field);
  for (const auto& b : mesh.boundary_edges())
    if (b.tag != BoundaryTag::Dirichlet)
      throw UnsupportedError("elasticity assembly supports homogeneous Dirichlet boundaries only, found " +
                             std::string(to_string(b.tag)));

  const std::size_t n = mesh.dof_count();
  std::vector<Triplet> triplets;
  const auto elements = mesh.elements();
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const Element& el = elements[e];
    const std::size_t nv = el.vertex_count();
    // Local unknown 2*i + c is component c of vertex i.
    std::array<std::array<double, 8>, 8> ke{};
    for (const auto& q : fe::element_quadrature(el.shape, field.discontinuous_on(mesh, e))) {
      const auto pd = fe::evaluate(mesh, el, q.ref);
      const DenseSymMatrix c = field.evaluate(e, pd.x);
      const double w = q.weight * pd.det_j;
      // Strain columns: e = (du1/dx, du2/dy, du1/dy + du2/dx).
      std::array<std::array<double, 3>, 8> strain{};
      for (std::size_t i = 0; i < nv; ++i) {
        strain[2 * i] = {pd.dx[i], 0.0, pd.dy[i]};
        strain[2 * i + 1] = {0.0, pd.dy[i], pd.dx[i]};
      }
      for (std::size_t a = 0; a < 2 * nv; ++a) {
        std::array<double, 3> stress{};
        for (std::size_t r = 0; r < 3; ++r)
          for (std::size_t s = 0; s < 3; ++s) stress[r] += c(r, s) * strain[a][s];
        for (std::size_t b = 0; b < 2 * nv; ++b) {
          double v = 0.0;
          for (std::size_t r = 0; r < 3; ++r) v += strain[b][r] * stress[r];
          ke[a][b] += w * v;
        }
      }
    }
    for (std::size_t a = 0; a < 2 * nv; ++a)
      for (std::size_t b = 0; b < 2 * nv; ++b) {
        const auto da = mesh.dof(el.vertices[a / 2]);
        const auto db = mesh.dof(el.vertices[b / 2]);
        if (da < 0 || db < 0) continue;
        const auto ga = static_cast<std::ptrdiff_t>((a % 2) * n) + da;
        const auto gb = static_cast<std::ptrdiff_t>((b % 2) * n) + db;
        push_upper(triplets, ga, gb, ke[a][b]);
      }
  }
  return SymmetricSparseMatrix::from_upper_triplets(2 * n, std::move(triplets));
}

LoadVector assemble_load(const Mesh& mesh, const std::function<double(Point)>& f) {
  LoadVector b(mesh.dof_count(), 0.0);
  const auto elements = mesh.elements();
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const Element& el = elements[e];
    for (const auto& q : fe::element_quadrature(el.shape, false)) {
      const auto pd = fe::evaluate(mesh, el, q.ref);
      const double w = q.weight * pd.det_j * f(pd.x);
      for (std::size_t i = 0; i < el.vertex_count(); ++i) {
        const auto d = mesh.dof(el.vertices[i]);
        if (d >= 0) b[static_cast<std::size_t>(d)] += w * pd.value[i];
      }
    }
  }
  return b;
}

LoadVector assemble_vector_load(const Mesh& mesh, const std::function<std::array<double, 2>(Point)>& f) {
  const std::size_t n = mesh.dof_count();
  LoadVector b(2 * n, 0.0);
  const auto elements = mesh.elements();
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const Element& el = elements[e];
    for (const auto& q : fe::element_quadrature(el.shape, false)) {
      const auto pd = fe::evaluate(mesh, el, q.ref);
      const auto fx = f(pd.x);
      const double w = q.weight * pd.det_j;
      for (std::size_t i = 0; i < el.vertex_count(); ++i) {
        const auto d = mesh.dof(el.vertices[i]);
        if (d < 0) continue;
        b[static_cast<std::size_t>(d)] += w * fx[0] * pd.value[i];
        b[n + static_cast<std::size_t>(d)] += w * fx[1] * pd.value[i];
      }
    }
  }
  return b;
}

}  // namespace eigenbound
