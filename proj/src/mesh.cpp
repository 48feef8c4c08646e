#include "eigenbound/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "eigenbound/errors.hpp"

namespace eigenbound {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

// The bilinear Jacobian determinant is affine in each reference coordinate,
// so positivity at the corners gives positivity on the whole element.
bool quad_is_positive(std::span<const Point> v, const Element& e) {
  const auto& p = v;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point& prev = p[e.vertices[(i + 3) % 4]];
    const Point& cur = p[e.vertices[i]];
    const Point& next = p[e.vertices[(i + 1) % 4]];
    if (!(signed_area(prev, cur, next) > 0.0)) return false;
  }
  return true;
}

std::pair<std::size_t, std::size_t> edge_key(std::size_t a, std::size_t b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Dirichlet:
      return "DIRICHLET";
    case BoundaryTag::Robin:
      return "ROBIN";
    case BoundaryTag::Neumann:
      return "NEUMANN";
    case BoundaryTag::Periodic:
      return "PERIODIC";
  }
  return "?";
}

std::optional<BoundaryTag> parse_boundary_tag(std::string_view text) {
  if (text == "DIRICHLET") return BoundaryTag::Dirichlet;
  if (text == "ROBIN") return BoundaryTag::Robin;
  if (text == "NEUMANN") return BoundaryTag::Neumann;
  if (text == "PERIODIC") return BoundaryTag::Periodic;
  return std::nullopt;
}

std::vector<std::size_t> resolve_periodic(std::size_t vertex_count, std::span<const PeriodicPair> pairs) {
  std::vector<std::size_t> parent(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) parent[v] = v;
  for (const auto& p : pairs) {
    if (p.slave >= vertex_count || p.master >= vertex_count)
      throw IndexError("periodic pair references a missing vertex");
    if (p.slave == p.master) throw GeometryError("periodic pair maps vertex " + std::to_string(p.slave) + " to itself");
    if (parent[p.slave] != p.slave && parent[p.slave] != p.master)
      throw GeometryError("vertex " + std::to_string(p.slave) + " is paired with two masters");
    parent[p.slave] = p.master;
  }
  std::vector<std::size_t> root(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    std::size_t r = v;
    std::size_t steps = 0;
    while (parent[r] != r) {
      r = parent[r];
      if (++steps > vertex_count) throw GeometryError("periodic pairs form a cycle");
    }
    root[v] = r;
  }
  return root;
}

Mesh::Mesh(std::vector<Point> vertices, std::vector<Element> elements, std::vector<BoundaryEdge> boundary,
           std::vector<PeriodicPair> periodic)
    : vertices_(std::move(vertices)),
      elements_(std::move(elements)),
      boundary_(std::move(boundary)),
      periodic_(std::move(periodic)) {
  if (vertices_.empty() || elements_.empty()) throw GeometryError("mesh needs vertices and elements");

  box_ = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw GeometryError("non-finite vertex coordinate");
    box_.x0 = std::min(box_.x0, p.x);
    box_.x1 = std::max(box_.x1, p.x);
    box_.y0 = std::min(box_.y0, p.y);
    box_.y1 = std::max(box_.y1, p.y);
  }

  std::map<std::pair<std::size_t, std::size_t>, int> edge_use;
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const auto& el = elements_[e];
    for (std::size_t i = 0; i < el.vertex_count(); ++i)
      if (el.vertices[i] >= vertices_.size())
        throw IndexError("element " + std::to_string(e) + " references missing vertex " +
                         std::to_string(el.vertices[i]));
    const bool positive = el.shape == ElementShape::Tri3
                              ? signed_area(vertices_[el.vertices[0]], vertices_[el.vertices[1]],
                                            vertices_[el.vertices[2]]) > 0.0
                              : quad_is_positive(vertices_, el);
    if (!positive) throw GeometryError("element " + std::to_string(e) + " is degenerate or clockwise");
    for (std::size_t i = 0; i < el.vertex_count(); ++i) {
      const auto [a, b] = el.edge(i);
      ++edge_use[edge_key(a, b)];
    }
  }

  element_boundary_.assign(elements_.size(), {});
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> tagged;
  std::vector<bool> dirichlet(vertices_.size(), false);
  std::vector<bool> on_periodic(vertices_.size(), false);
  for (std::size_t b = 0; b < boundary_.size(); ++b) {
    const auto& be = boundary_[b];
    if (be.element >= elements_.size()) throw IndexError("boundary edge references missing element");
    const auto& el = elements_[be.element];
    if (be.local_edge >= el.vertex_count()) throw IndexError("boundary edge has invalid local edge index");
    const auto [a, c] = el.edge(be.local_edge);
    const auto key = edge_key(a, c);
    if (edge_use[key] != 1)
      throw GeometryError("edge " + std::to_string(be.local_edge) + " of element " + std::to_string(be.element) +
                          " is interior but carries a boundary tag");
    if (!tagged.emplace(key, b).second)
      throw GeometryError("boundary edge of element " + std::to_string(be.element) + " is tagged twice");
    element_boundary_[be.element].push_back(b);
    if (be.tag == BoundaryTag::Dirichlet) dirichlet[a] = dirichlet[c] = true;
    if (be.tag == BoundaryTag::Periodic) on_periodic[a] = on_periodic[c] = true;
  }
  for (const auto& [key, uses] : edge_use)
    if (uses == 1 && !tagged.count(key))
      throw GeometryError("boundary edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                          ") has no tag");

  for (const auto& p : periodic_) {
    if (p.slave < vertices_.size() && p.master < vertices_.size() && (dirichlet[p.slave] || dirichlet[p.master]))
      throw GeometryError("vertex pair (" + std::to_string(p.slave) + "," + std::to_string(p.master) +
                          ") is both periodic and Dirichlet");
  }
  const auto root = resolve_periodic(vertices_.size(), periodic_);
  std::vector<bool> paired(vertices_.size(), false);
  for (const auto& p : periodic_) paired[p.slave] = paired[p.master] = true;
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    if (on_periodic[v] && !dirichlet[v] && !paired[v])
      throw GeometryError("vertex " + std::to_string(v) + " lies on a periodic edge but has no partner");

  dof_map_.assign(vertices_.size(), kEliminated);
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (dirichlet[v] || root[v] != v) continue;
    dof_map_[v] = static_cast<std::ptrdiff_t>(dof_vertex_.size());
    dof_vertex_.push_back(v);
  }
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    if (!dirichlet[v] && root[v] != v) dof_map_[v] = dof_map_[root[v]];

  patches_.assign(dof_vertex_.size(), {});
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const auto& el = elements_[e];
    for (std::size_t i = 0; i < el.vertex_count(); ++i) {
      const auto d = dof_map_[el.vertices[i]];
      if (d != kEliminated) patches_[static_cast<std::size_t>(d)].push_back(e);
    }
  }
  for (auto& p : patches_) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
}

std::size_t Mesh::dof_vertex(std::size_t k) const {
  if (k >= dof_vertex_.size()) throw IndexError("DOF " + std::to_string(k) + " out of range");
  return dof_vertex_[k];
}

std::span<const std::size_t> Mesh::patch(std::size_t k) const {
  if (k >= patches_.size())
    throw IndexError("DOF " + std::to_string(k) + " out of range (mesh has " + std::to_string(patches_.size()) +
                     " DOFs)");
  return patches_[k];
}

std::span<const std::size_t> Mesh::element_boundary(std::size_t element) const {
  return element_boundary_.at(element);
}

double Mesh::element_area(std::size_t element) const {
  const auto& el = elements_.at(element);
  const auto& v = vertices_;
  if (el.shape == ElementShape::Tri3) return signed_area(v[el.vertices[0]], v[el.vertices[1]], v[el.vertices[2]]);
  return signed_area(v[el.vertices[0]], v[el.vertices[1]], v[el.vertices[2]]) +
         signed_area(v[el.vertices[0]], v[el.vertices[2]], v[el.vertices[3]]);
}

Rectangle Mesh::element_box(std::size_t element) const {
  const auto& el = elements_.at(element);
  Rectangle r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < el.vertex_count(); ++i) {
    const Point& p = vertices_[el.vertices[i]];
    r.x0 = std::min(r.x0, p.x);
    r.x1 = std::max(r.x1, p.x);
    r.y0 = std::min(r.y0, p.y);
    r.y1 = std::max(r.y1, p.y);
  }
  return r;
}

double Mesh::diameter() const noexcept { return std::hypot(box_.x1 - box_.x0, box_.y1 - box_.y0); }

bool Mesh::has_tag(BoundaryTag tag) const noexcept {
  return std::any_of(boundary_.begin(), boundary_.end(), [tag](const BoundaryEdge& b) { return b.tag == tag; });
}

bool Mesh::is_fully_periodic() const noexcept {
  return !boundary_.empty() && std::all_of(boundary_.begin(), boundary_.end(), [](const BoundaryEdge& b) {
    return b.tag == BoundaryTag::Periodic;
  });
}

std::vector<PeriodicPair> match_periodic_vertices(std::span<const Point> vertices, const Rectangle& box,
                                                  bool pair_x, bool pair_y) {
  const double tol = 1e-9 * std::hypot(box.x1 - box.x0, box.y1 - box.y0);
  const double width = box.x1 - box.x0;
  const double height = box.y1 - box.y0;
  auto near = [tol](double a, double b) { return std::abs(a - b) <= tol; };
  std::vector<PeriodicPair> pairs;
  auto match = [&](auto on_slave_side, Point shift, auto skip) {
    for (std::size_t s = 0; s < vertices.size(); ++s) {
      const Point& ps = vertices[s];
      if (!on_slave_side(ps) || skip(ps)) continue;
      const Point target{ps.x - shift.x, ps.y - shift.y};
      std::optional<std::size_t> found;
      for (std::size_t m = 0; m < vertices.size(); ++m)
        if (m != s && near(vertices[m].x, target.x) && near(vertices[m].y, target.y)) {
          found = m;
          break;
        }
      if (!found) throw GeometryError("no periodic partner for vertex " + std::to_string(s));
      pairs.push_back({s, *found});
    }
  };
  if (pair_x)
    match([&](const Point& p) { return near(p.x, box.x1); }, Point{width, 0.0}, [](const Point&) { return false; });
  if (pair_y)
    match([&](const Point& p) { return near(p.y, box.y1); }, Point{0.0, height},
          [&](const Point& p) { return pair_x && near(p.x, box.x1); });
  return pairs;
}

Mesh build_uniform_quad_mesh(const Rectangle& domain, std::size_t n, const SideTags& tags) {
  if (n < 1) throw ParameterError("uniform mesh needs at least one subdivision per axis");
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0) || !std::isfinite(domain.x0) ||
      !std::isfinite(domain.x1) || !std::isfinite(domain.y0) || !std::isfinite(domain.y1))
    throw GeometryError("degenerate rectangle domain");
  const bool px = tags.left == BoundaryTag::Periodic;
  const bool py = tags.bottom == BoundaryTag::Periodic;
  if (px != (tags.right == BoundaryTag::Periodic) || py != (tags.top == BoundaryTag::Periodic))
    throw ParameterError("periodic sides must come in opposite pairs");

  const std::size_t m = n + 1;
  const double dn = static_cast<double>(n);
  std::vector<Point> vertices;
  vertices.reserve(m * m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      // Weighted form keeps symmetric domains exactly symmetric.
      const double fi = static_cast<double>(i);
      const double fj = static_cast<double>(j);
      vertices.push_back({(domain.x0 * (dn - fi) + domain.x1 * fi) / dn, (domain.y0 * (dn - fj) + domain.y1 * fj) / dn});
    }
  std::vector<Element> elements;
  std::vector<BoundaryEdge> boundary;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t v0 = j * m + i;
      const std::size_t e = elements.size();
      elements.push_back({ElementShape::Quad4, {v0, v0 + 1, v0 + 1 + m, v0 + m}});
      if (j == 0) boundary.push_back({e, 0, tags.bottom});
      if (i == n - 1) boundary.push_back({e, 1, tags.right});
      if (j == n - 1) boundary.push_back({e, 2, tags.top});
      if (i == 0) boundary.push_back({e, 3, tags.left});
    }

  std::vector<PeriodicPair> pairs;
  if (px || py) {
    std::vector<bool> dirichlet(vertices.size(), false);
    for (const auto& b : boundary)
      if (b.tag == BoundaryTag::Dirichlet) {
        const auto [a, c] = elements[b.element].edge(b.local_edge);
        dirichlet[a] = dirichlet[c] = true;
      }
    for (const auto& p : match_periodic_vertices(vertices, domain, px, py))
      if (!dirichlet[p.slave] && !dirichlet[p.master]) pairs.push_back(p);
  }
  return Mesh(std::move(vertices), std::move(elements), std::move(boundary), std::move(pairs));
}

Mesh read_mesh(std::istream& in) {
  std::vector<Point> vertices;
  std::vector<Element> elements;
  std::vector<std::size_t> element_line;
  std::vector<BoundaryEdge> boundary;
  std::vector<std::size_t> boundary_line;
  std::vector<PeriodicPair> pairs;
  std::vector<std::size_t> pair_line;
  bool have_header = false;

  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string kind;
    if (!(ls >> kind)) continue;

    auto read_index = [&](const char* what) {
      long long v = 0;
      if (!(ls >> v) || v < 0) throw ParseError(lineno, std::string("expected non-negative ") + what);
      return static_cast<std::size_t>(v);
    };
    auto finish = [&] {
      std::string extra;
      if (ls >> extra) throw ParseError(lineno, "unexpected trailing token '" + extra + "'");
    };

    if (!have_header) {
      int version = 0;
      int dim = 0;
      if (kind != "meshfmt" || !(ls >> version >> dim)) throw ParseError(lineno, "expected header 'meshfmt 1 <d>'");
      if (version != 1) throw ParseError(lineno, "unsupported format version " + std::to_string(version));
      if (dim != 2) throw ParseError(lineno, "only d = 2 meshes are supported");
      finish();
      have_header = true;
      continue;
    }
    if (kind == "v") {
      Point p;
      if (!(ls >> p.x >> p.y)) throw ParseError(lineno, "vertex needs two coordinates");
      finish();
      vertices.push_back(p);
    } else if (kind == "e") {
      std::string shape;
      ls >> shape;
      Element el;
      if (shape == "tri") {
        el.shape = ElementShape::Tri3;
      } else if (shape == "quad") {
        el.shape = ElementShape::Quad4;
      } else {
        throw ParseError(lineno, "unknown element type '" + shape + "'");
      }
      for (std::size_t i = 0; i < el.vertex_count(); ++i) el.vertices[i] = read_index("vertex index");
      finish();
      elements.push_back(el);
      element_line.push_back(lineno);
    } else if (kind == "b") {
      BoundaryEdge be;
      be.element = read_index("element index");
      be.local_edge = read_index("local edge index");
      std::string tag;
      if (!(ls >> tag)) throw ParseError(lineno, "boundary line needs a tag");
      const auto parsed = parse_boundary_tag(tag);
      if (!parsed) throw ParseError(lineno, "unknown boundary tag '" + tag + "'");
      be.tag = *parsed;
      finish();
      boundary.push_back(be);
      boundary_line.push_back(lineno);
    } else if (kind == "p") {
      PeriodicPair pp;
      pp.slave = read_index("slave vertex");
      pp.master = read_index("master vertex");
      finish();
      pairs.push_back(pp);
      pair_line.push_back(lineno);
    } else {
      throw ParseError(lineno, "unknown record '" + kind + "'");
    }
  }
  if (!have_header) throw ParseError(lineno, "missing 'meshfmt' header");

  for (std::size_t e = 0; e < elements.size(); ++e) {
    const auto& el = elements[e];
    for (std::size_t i = 0; i < el.vertex_count(); ++i)
      if (el.vertices[i] >= vertices.size())
        throw ParseError(element_line[e], "element references vertex " + std::to_string(el.vertices[i]) +
                                              " but only " + std::to_string(vertices.size()) +
                                              " vertices are defined");
    const auto& v = vertices;
    const bool positive =
        el.shape == ElementShape::Tri3
            ? signed_area(v[el.vertices[0]], v[el.vertices[1]], v[el.vertices[2]]) > 0.0
            : quad_is_positive(v, el);
    if (!positive) throw ParseError(element_line[e], "element is not counter-clockwise (inconsistent orientation)");
  }
  for (std::size_t b = 0; b < boundary.size(); ++b) {
    if (boundary[b].element >= elements.size())
      throw ParseError(boundary_line[b], "boundary edge references element " + std::to_string(boundary[b].element) +
                                             " of " + std::to_string(elements.size()));
    if (boundary[b].local_edge >= elements[boundary[b].element].vertex_count())
      throw ParseError(boundary_line[b], "local edge index out of range");
  }
  for (std::size_t p = 0; p < pairs.size(); ++p)
    if (pairs[p].slave >= vertices.size() || pairs[p].master >= vertices.size())
      throw ParseError(pair_line[p], "periodic pair references a missing vertex");

  return Mesh(std::move(vertices), std::move(elements), std::move(boundary), std::move(pairs));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "meshfmt 1 2\n" << std::setprecision(17);
  for (const auto& p : mesh.vertices()) out << "v " << p.x << ' ' << p.y << '\n';
  for (const auto& el : mesh.elements()) {
    out << (el.shape == ElementShape::Tri3 ? "e tri" : "e quad");
    for (std::size_t i = 0; i < el.vertex_count(); ++i) out << ' ' << el.vertices[i];
    out << '\n';
  }
  for (const auto& b : mesh.boundary_edges()) out << "b " << b.element << ' ' << b.local_edge << ' ' << to_string(b.tag) << '\n';
  for (const auto& p : mesh.periodic_pairs()) out << "p " << p.slave << ' ' << p.master << '\n';
  out.flags(flags);
  out.precision(precision);
}

std::vector<std::size_t> patch_elements(const Mesh& mesh, std::size_t k) {
  const auto p = mesh.patch(k);
  return {p.begin(), p.end()};
}

}  // namespace eigenbound
