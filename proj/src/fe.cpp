#include "eigenbound/fe.hpp"

#include <cmath>

#include "eigenbound/errors.hpp"

namespace eigenbound::fe {

namespace {

constexpr std::array<double, 4> kQuadXi{-1.0, 1.0, 1.0, -1.0};
constexpr std::array<double, 4> kQuadEta{-1.0, -1.0, 1.0, 1.0};

void shape_data(ElementShape shape, RefPoint r, std::array<double, 4>& n, std::array<double, 4>& dxi,
                std::array<double, 4>& deta) {
  if (shape == ElementShape::Tri3) {
    n = {1.0 - r.xi - r.eta, r.xi, r.eta, 0.0};
    dxi = {-1.0, 1.0, 0.0, 0.0};
    deta = {-1.0, 0.0, 1.0, 0.0};
    return;
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const double a = 1.0 + kQuadXi[i] * r.xi;
    const double b = 1.0 + kQuadEta[i] * r.eta;
    n[i] = 0.25 * a * b;
    dxi[i] = 0.25 * kQuadXi[i] * b;
    deta[i] = 0.25 * a * kQuadEta[i];
  }
}

}  // namespace

std::vector<QuadraturePoint> element_quadrature(ElementShape shape, bool subdivide) {
  std::vector<QuadraturePoint> out;
  if (shape == ElementShape::Quad4) {
    const double g = 1.0 / std::sqrt(3.0);
    const int cells = subdivide ? 4 : 1;
    const double half = 1.0 / cells;  // half-width of a sub-cell in [-1,1]
    const double w = half * half;
    for (int j = 0; j < cells; ++j)
      for (int i = 0; i < cells; ++i) {
        const double cx = -1.0 + (2 * i + 1) * half;
        const double cy = -1.0 + (2 * j + 1) * half;
        for (double sy : {-g, g})
          for (double sx : {-g, g}) out.push_back({{cx + sx * half, cy + sy * half}, w});
      }
    return out;
  }

  constexpr std::array<RefPoint, 3> base{{{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}}};
  if (!subdivide) {
    for (const auto& p : base) out.push_back({p, 1.0 / 6.0});
    return out;
  }
  constexpr int m = 4;
  const double h = 1.0 / m;
  auto push_triangle = [&](RefPoint a, RefPoint b, RefPoint c) {
    for (const auto& p : base) {
      const double l0 = 1.0 - p.xi - p.eta;
      out.push_back({{l0 * a.xi + p.xi * b.xi + p.eta * c.xi, l0 * a.eta + p.xi * b.eta + p.eta * c.eta},
                     h * h / 6.0});
    }
  };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i + j < m; ++i) {
      push_triangle({i * h, j * h}, {(i + 1) * h, j * h}, {i * h, (j + 1) * h});
      if (i + j < m - 1) push_triangle({(i + 1) * h, j * h}, {(i + 1) * h, (j + 1) * h}, {i * h, (j + 1) * h});
    }
  return out;
}

std::array<QuadraturePoint, 2> edge_quadrature() {
  const double g = 0.5 / std::sqrt(3.0);
  return {{{{0.5 - g, 0.0}, 0.5}, {{0.5 + g, 0.0}, 0.5}}};
}

std::vector<RefPoint> sample_points(ElementShape shape) {
  std::vector<RefPoint> out;
  if (shape == ElementShape::Quad4) {
    for (int j = 0; j < 5; ++j)
      for (int i = 0; i < 5; ++i) out.push_back({-0.8 + 0.4 * i, -0.8 + 0.4 * j});
    for (std::size_t c = 0; c < 4; ++c) out.push_back({kQuadXi[c], kQuadEta[c]});
    return out;
  }
  for (int j = 0; j <= 4; ++j)
    for (int i = 0; i + j <= 4; ++i) out.push_back({0.25 * i, 0.25 * j});
  return out;
}

PointData evaluate(const Mesh& mesh, const Element& element, RefPoint ref) {
  std::array<double, 4> dxi{};
  std::array<double, 4> deta{};
  PointData d;
  shape_data(element.shape, ref, d.value, dxi, deta);
  const auto verts = mesh.vertices();
  double j11 = 0.0, j12 = 0.0, j21 = 0.0, j22 = 0.0;
  for (std::size_t i = 0; i < element.vertex_count(); ++i) {
    const Point& p = verts[element.vertices[i]];
    d.x.x += d.value[i] * p.x;
    d.x.y += d.value[i] * p.y;
    j11 += dxi[i] * p.x;
    j12 += dxi[i] * p.y;
    j21 += deta[i] * p.x;
    j22 += deta[i] * p.y;
  }
  d.det_j = j11 * j22 - j12 * j21;
  if (!(d.det_j > 0.0)) throw GeometryError("non-positive Jacobian inside an element");
  const double inv = 1.0 / d.det_j;
  for (std::size_t i = 0; i < element.vertex_count(); ++i) {
    d.dx[i] = inv * (j22 * dxi[i] - j12 * deta[i]);
    d.dy[i] = inv * (-j21 * dxi[i] + j11 * deta[i]);
  }
  return d;
}

Point to_physical(const Mesh& mesh, const Element& element, RefPoint ref) {
  std::array<double, 4> n{};
  std::array<double, 4> dxi{};
  std::array<double, 4> deta{};
  shape_data(element.shape, ref, n, dxi, deta);
  Point x;
  for (std::size_t i = 0; i < element.vertex_count(); ++i) {
    const Point& p = mesh.vertices()[element.vertices[i]];
    x.x += n[i] * p.x;
    x.y += n[i] * p.y;
  }
  return x;
}

}  // namespace eigenbound::fe
