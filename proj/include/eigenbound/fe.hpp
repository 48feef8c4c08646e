#pragma once

// Reference-element machinery for P1 triangles and Q1 quadrilaterals.
// Quads live on [-1,1]^2, triangles on the unit simplex (0,0),(1,0),(0,1).

#include <array>
#include <cstddef>
#include <vector>

#include "eigenbound/mesh.hpp"

namespace eigenbound::fe {

struct RefPoint {
  double xi = 0.0;
  double eta = 0.0;
};

struct QuadraturePoint {
  RefPoint ref;
  double weight = 0.0;  // reference measure
};

/// 2x2 Gauss on quads, 3-point (degree 2) on triangles. With `subdivide`
/// the same rule is applied on a 4x4 grid of sub-cells (16 sub-triangles).
std::vector<QuadraturePoint> element_quadrature(ElementShape shape, bool subdivide);

/// 2-point Gauss on the unit interval, weights summing to 1.
std::array<QuadraturePoint, 2> edge_quadrature();

/// Points used when a coefficient's range has to be estimated by sampling:
/// a 5x5 lattice plus the corners on quads, a 15-point lattice on triangles.
std::vector<RefPoint> sample_points(ElementShape shape);

/// Geometry and basis data at one reference point of an element.
struct PointData {
  Point x;
  double det_j = 0.0;
  std::array<double, 4> value{};
  std::array<double, 4> dx{};
  std::array<double, 4> dy{};
};

PointData evaluate(const Mesh& mesh, const Element& element, RefPoint ref);
Point to_physical(const Mesh& mesh, const Element& element, RefPoint ref);

}  // namespace eigenbound::fe
