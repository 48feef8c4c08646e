#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace eigenbound {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundaryTag { Dirichlet, Robin, Neumann, Periodic };
enum class ElementShape { Tri3, Quad4 };

std::string_view to_string(BoundaryTag tag);
std::optional<BoundaryTag> parse_boundary_tag(std::string_view text);

/// Vertices are listed counter-clockwise. Local edge i runs from vertex i
/// to vertex (i + 1) mod vertex_count.
struct Element {
  ElementShape shape = ElementShape::Quad4;
  std::array<std::size_t, 4> vertices{};

  std::size_t vertex_count() const noexcept { return shape == ElementShape::Tri3 ? 3 : 4; }
  std::pair<std::size_t, std::size_t> edge(std::size_t local) const noexcept {
    return {vertices[local], vertices[(local + 1) % vertex_count()]};
  }
};

struct BoundaryEdge {
  std::size_t element = 0;
  std::size_t local_edge = 0;
  BoundaryTag tag = BoundaryTag::Dirichlet;
};

struct PeriodicPair {
  std::size_t slave = 0;
  std::size_t master = 0;
};

struct Rectangle {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
};

struct SideTags {
  BoundaryTag left = BoundaryTag::Dirichlet;
  BoundaryTag right = BoundaryTag::Dirichlet;
  BoundaryTag bottom = BoundaryTag::Dirichlet;
  BoundaryTag top = BoundaryTag::Dirichlet;

  static SideTags all(BoundaryTag tag) { return {tag, tag, tag, tag}; }
};

/// Conforming 2-D mesh with nodal P1/Q1 degrees of freedom.
///
/// Vertices on DIRICHLET edges are eliminated from the numbering; periodic
/// slaves share their master's DOF. Free DOFs are numbered in increasing
/// order of the vertex that owns them. The patch of a DOF is the set of
/// elements touching any vertex mapped to it. Immutable once built.
class Mesh {
 public:
  static constexpr std::ptrdiff_t kEliminated = -1;

  /// Validates geometry, tags and periodic pairs and builds the DOF map.
  Mesh(std::vector<Point> vertices, std::vector<Element> elements, std::vector<BoundaryEdge> boundary,
       std::vector<PeriodicPair> periodic = {});

  std::span<const Point> vertices() const noexcept { return vertices_; }
  std::span<const Element> elements() const noexcept { return elements_; }
  std::span<const BoundaryEdge> boundary_edges() const noexcept { return boundary_; }
  std::span<const PeriodicPair> periodic_pairs() const noexcept { return periodic_; }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t element_count() const noexcept { return elements_.size(); }
  std::size_t dof_count() const noexcept { return patches_.size(); }

  /// DOF of a vertex, or kEliminated.
  std::ptrdiff_t dof(std::size_t vertex) const { return dof_map_.at(vertex); }
  std::span<const std::ptrdiff_t> dof_map() const noexcept { return dof_map_; }
  /// Vertex whose DOF is k (the periodic master when identified).
  std::size_t dof_vertex(std::size_t k) const;

  /// Sorted element ids of patch k. Throws IndexError if k is out of range.
  std::span<const std::size_t> patch(std::size_t k) const;

  /// Boundary edges of one element (indices into boundary_edges()).
  std::span<const std::size_t> element_boundary(std::size_t element) const;

  double element_area(std::size_t element) const;
  /// Axis-aligned bounding box of an element.
  Rectangle element_box(std::size_t element) const;
  Rectangle bounding_box() const noexcept { return box_; }
  double diameter() const noexcept;

  bool has_tag(BoundaryTag tag) const noexcept;
  bool is_fully_periodic() const noexcept;

 private:
  std::vector<Point> vertices_;
  std::vector<Element> elements_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<PeriodicPair> periodic_;
  std::vector<std::ptrdiff_t> dof_map_;
  std::vector<std::size_t> dof_vertex_;
  std::vector<std::vector<std::size_t>> patches_;
  std::vector<std::vector<std::size_t>> element_boundary_;
  Rectangle box_;
};

/// Resolves slave -> master chains; every vertex maps to itself or its root
/// master. Applying it to an already resolved map returns the same map.
std::vector<std::size_t> resolve_periodic(std::size_t vertex_count, std::span<const PeriodicPair> pairs);

/// Pairs vertices on opposite sides of `box` whose coordinates agree after
/// translation, to within 1e-9 of the box diameter.
std::vector<PeriodicPair> match_periodic_vertices(std::span<const Point> vertices, const Rectangle& box,
                                                  bool pair_x, bool pair_y);

/// (n+1)^2 vertices on a uniform grid over `domain`, n^2 Q1 elements.
/// Opposite sides must both be PERIODIC or neither.
Mesh build_uniform_quad_mesh(const Rectangle& domain, std::size_t n, const SideTags& tags);

/// Reads the line-oriented mesh format:
///   meshfmt 1 2
///   v x y
///   e tri i j k | e quad i j k l     (0-based, counter-clockwise)
///   b <element> <local-edge> <TAG>
///   p <slave-vertex> <master-vertex>
/// '#' starts a comment. Errors are ParseError with the offending line.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
/// Same reader; the name mirrors its main use for triangle meshes.
inline Mesh read_tri_mesh(std::istream& in) { return read_mesh(in); }

void write_mesh(std::ostream& out, const Mesh& mesh);

/// Elements of the patch of DOF k.
std::vector<std::size_t> patch_elements(const Mesh& mesh, std::size_t k);

}  // namespace eigenbound
