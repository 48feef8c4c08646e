#pragma once

#include <array>
#include <functional>
#include <vector>

#include "eigenbound/material.hpp"
#include "eigenbound/mesh.hpp"
#include "eigenbound/sparse.hpp"

namespace eigenbound {

using LoadVector = std::vector<double>;

/// Stiffness matrix over the free DOFs:
///   A_kl = sum_E int_E grad(phi_l) . A grad(phi_k) + int_{ROBIN} g3 phi_l phi_k.
/// 2x2 Gauss per quad and 3 points per triangle; elements on which the field
/// jumps use the same rule on a 4x4 grid of sub-cells. Robin edges use
/// 2-point Gauss. Elements are visited in order, so the result is
/// deterministic.
SymmetricSparseMatrix assemble_diffusion(const Mesh& mesh, const MaterialTensorField& field,
                                         const RobinCoefficientField& g3 = {});

/// Plane elasticity matrix int (d phi_l)^T C (d phi_k) with the 3x3 Voigt
/// matrix C. Unknowns are ordered component-major: all u1 DOFs, then all u2.
/// Only homogeneous Dirichlet boundaries are supported.
SymmetricSparseMatrix assemble_elasticity_2d(const Mesh& mesh, const MaterialTensorField& field);

/// b_k = int f phi_k.
LoadVector assemble_load(const Mesh& mesh, const std::function<double(Point)>& f);
/// Elasticity load with the component-major layout of assemble_elasticity_2d.
LoadVector assemble_vector_load(const Mesh& mesh, const std::function<std::array<double, 2>(Point)>& f);

}  // namespace eigenbound
