#include "eigenbound/problem.hpp"

#include <algorithm>
#include <cmath>

#include "eigenbound/assembly.hpp"
#include "eigenbound/errors.hpp"

namespace eigenbound {

namespace {

// Empty string when patch k satisfies the exactness hypothesis for c.
std::string patch_violation(const Problem& p, std::size_t k, double c) {
  const double tol = 1e-12 * std::max(1.0, std::abs(c));
  for (std::size_t e : p.mesh.patch(k)) {
    const auto ha = p.a.range_hull(p.mesh, e);
    const auto hat = p.at.range_hull(p.mesh, e);
    if (!ha.certified || !hat.certified) return "element " + std::to_string(e) + " has no certified range";
    const PencilRange r = pencil_range(ha.vertices, hat.vertices);
    if (std::abs(r.lo - c) > tol || std::abs(r.hi - c) > tol)
      return "element " + std::to_string(e) + " has ratio range [" + std::to_string(r.lo) + ", " +
             std::to_string(r.hi) + "]";
    const bool robin_data = !(p.g3.is_zero() && p.g3t.is_zero());
    if (robin_data)
      for (std::size_t b : p.mesh.element_boundary(e))
        if (p.mesh.boundary_edges()[b].tag == BoundaryTag::Robin)
          return "element " + std::to_string(e) + " touches a Robin edge";
  }
  return {};
}

}  // namespace

Pencil assemble_pencil(const Problem& p) {
  if (p.physics == Physics::Elasticity) return {assemble_elasticity_2d(p.mesh, p.a), assemble_elasticity_2d(p.mesh, p.at)};
  return {assemble_diffusion(p.mesh, p.a, p.g3), assemble_diffusion(p.mesh, p.at, p.g3t)};
}

BoundsResult problem_bounds(const Problem& p) {
  if (p.physics == Physics::Elasticity) return elasticity_bounds(p.mesh, p.a, p.at, 2);
  return diffusion_bounds(p.mesh, p.a, p.at, p.g3, p.g3t, p.singular);
}

EigenDecomposition solve_oracle(const Problem& p, const Pencil& pencil, bool want_vectors) {
  DenseEigOptions opt;
  opt.deflate_kernel = p.singular;
  opt.components = p.components();
  opt.want_vectors = want_vectors;
  return gen_eig_dense(pencil.a.to_dense(), pencil.at.to_dense(), opt);
}

MultiplicityCheck exact_eigenvalue_check(const Problem& p, double c, std::span<const std::size_t> patches,
                                         const Spectrum& spectrum) {
  for (std::size_t k : patches) {
    const std::string why = patch_violation(p, k, c);
    if (!why.empty()) throw ContractError("patch " + std::to_string(k) + " violates the exactness hypothesis: " + why);
  }
  MultiplicityCheck out;
  out.required = p.components() * patches.size();
  out.count = static_cast<std::size_t>(std::count_if(spectrum.values.begin(), spectrum.values.end(),
                                                     [c](double v) { return std::abs(v - c) <= 1e-8; }));
  out.holds = out.count >= out.required;
  return out;
}

std::vector<std::size_t> patches_with_constant_ratio(const Problem& p, double c) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < p.mesh.dof_count(); ++k)
    if (patch_violation(p, k, c).empty()) out.push_back(k);
  return out;
}

}  // namespace eigenbound
