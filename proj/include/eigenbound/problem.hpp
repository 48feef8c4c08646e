#pragma once

// A discretized pencil together with everything needed to bound it and to
// check the bounds: mesh, coefficient fields, Robin data and the singular flag.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "eigenbound/bounds.hpp"
#include "eigenbound/material.hpp"
#include "eigenbound/mesh.hpp"
#include "eigenbound/smalleig.hpp"
#include "eigenbound/sparse.hpp"

namespace eigenbound {

enum class Physics { Diffusion, Elasticity };

struct Problem {
  Physics physics;
  Mesh mesh;
  MaterialTensorField a;
  MaterialTensorField at;
  RobinCoefficientField g3{};
  RobinCoefficientField g3t{};
  /// Pure periodic/Neumann problem with the constants as shared kernel.
  bool singular = false;

  /// Unknowns per vertex DOF.
  std::size_t components() const noexcept { return physics == Physics::Elasticity ? 2 : 1; }
  std::size_t order() const noexcept { return components() * mesh.dof_count(); }
};

struct Pencil {
  SymmetricSparseMatrix a;
  SymmetricSparseMatrix at;
};

Pencil assemble_pencil(const Problem& problem);
BoundsResult problem_bounds(const Problem& problem);

/// Dense oracle on the assembled pencil; singular problems are deflated.
EigenDecomposition solve_oracle(const Problem& problem, const Pencil& pencil, bool want_vectors);

struct MultiplicityCheck {
  std::size_t count = 0;     // eigenvalues within 1e-8 of c
  std::size_t required = 0;  // components x number of patches
  bool holds = false;
};

/// If A~^{-1}(x) A(x) = c I on each listed patch and none of them touches a
/// Robin edge with nonzero data, c is an eigenvalue of multiplicity at least
/// components x patches.size(). Throws ContractError naming the first patch
/// that violates the hypothesis.
MultiplicityCheck exact_eigenvalue_check(const Problem& problem, double c, std::span<const std::size_t> patches,
                                         const Spectrum& spectrum);

/// DOFs whose whole patch satisfies A~^{-1} A = c I (certified ranges only)
/// and touches no Robin edge with nonzero data.
std::vector<std::size_t> patches_with_constant_ratio(const Problem& problem, double c);

}  // namespace eigenbound
