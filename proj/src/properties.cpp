#include "eigenbound/properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "eigenbound/bounds.hpp"
#include "eigenbound/problem.hpp"

namespace eigenbound {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

DenseSymMatrix random_spd(Rng& rng, std::size_t m) {
  std::vector<double> g(m * m);
  for (auto& v : g) v = uniform(rng, -1.0, 1.0);
  DenseSymMatrix out(m);
  const double shift = uniform(rng, 0.1, 1.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      double s = i == j ? shift : 0.0;
      for (std::size_t k = 0; k < m; ++k) s += g[i * m + k] * g[j * m + k];
      out.set(i, j, s);
    }
  return out;
}

// Uniform grid with jittered interior vertices, optionally split into triangles.
Mesh random_mesh(Rng& rng, std::size_t n, const SideTags& tags, bool triangles) {
  const double w = uniform(rng, 0.5, 3.0);
  const double h = uniform(rng, 0.5, 3.0);
  const double x0 = uniform(rng, -1.0, 1.0);
  const double y0 = uniform(rng, -1.0, 1.0);
  const Mesh base = build_uniform_quad_mesh({x0, x0 + w, y0, y0 + h}, n, tags);

  std::vector<Point> verts(base.vertices().begin(), base.vertices().end());
  const double hx = w / static_cast<double>(n);
  const double hy = h / static_cast<double>(n);
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 1; i < n; ++i) {
      Point& p = verts[j * (n + 1) + i];
      p.x += uniform(rng, -0.2, 0.2) * hx;
      p.y += uniform(rng, -0.2, 0.2) * hy;
    }
  std::vector<Element> elems(base.elements().begin(), base.elements().end());
  std::vector<BoundaryEdge> bnd(base.boundary_edges().begin(), base.boundary_edges().end());
  if (!triangles) return Mesh(std::move(verts), std::move(elems), std::move(bnd));

  // Quad (v0 v1 v2 v3) -> two triangles; quad edge q maps to (triangle, local edge).
  std::vector<Element> tris;
  std::vector<std::array<std::pair<std::size_t, std::size_t>, 4>> edge_map;
  for (const Element& q : elems) {
    const auto& v = q.vertices;
    const std::size_t t = tris.size();
    if (rng() % 2 == 0) {
      tris.push_back({ElementShape::Tri3, {v[0], v[1], v[2], 0}});
      tris.push_back({ElementShape::Tri3, {v[0], v[2], v[3], 0}});
      edge_map.push_back({{{t, 0}, {t, 1}, {t + 1, 1}, {t + 1, 2}}});
    } else {
      tris.push_back({ElementShape::Tri3, {v[0], v[1], v[3], 0}});
      tris.push_back({ElementShape::Tri3, {v[1], v[2], v[3], 0}});
      edge_map.push_back({{{t, 0}, {t + 1, 0}, {t + 1, 1}, {t, 2}}});
    }
  }
  std::vector<BoundaryEdge> tri_bnd;
  for (const BoundaryEdge& b : bnd) {
    const auto [e, l] = edge_map[b.element][b.local_edge];
    tri_bnd.push_back({e, l, b.tag});
  }
  return Mesh(std::move(verts), std::move(tris), std::move(tri_bnd));
}

BoundaryTag random_side(Rng& rng) {
  switch (rng() % 3) {
    case 0: return BoundaryTag::Dirichlet;
    case 1: return BoundaryTag::Robin;
    default: return BoundaryTag::Neumann;
  }
}

std::vector<DenseSymMatrix> random_fields(Rng& rng, std::size_t count, std::size_t m) {
  std::vector<DenseSymMatrix> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_spd(rng, m));
  return out;
}

bool all_close_to_one(const std::vector<double>& v, double tol) {
  return std::all_of(v.begin(), v.end(), [tol](double x) { return std::abs(x - 1.0) <= tol; });
}

PropertyTrial run_trial(Rng& rng, std::size_t index) {
  PropertyTrial t;
  t.index = index;
  const bool elasticity = index % 2 == 1;
  t.physics = elasticity ? "elasticity" : "diffusion";
  t.n = pick(rng, 2, 8);
  const bool triangles = rng() % 2 == 0;
  t.shape = triangles ? "tri" : "quad";

  SideTags tags;
  bool singular = false;
  if (!elasticity) {
    if (rng() % 6 == 0) {
      tags = SideTags::all(BoundaryTag::Neumann);
      singular = true;
    } else {
      tags = {random_side(rng), random_side(rng), random_side(rng), random_side(rng)};
      tags.bottom = BoundaryTag::Dirichlet;
    }
  }
  const Mesh mesh = random_mesh(rng, t.n, tags, triangles);
  const std::size_t m = elasticity ? 3 : 2;
  const auto a = MaterialTensorField::element_constant(random_fields(rng, mesh.element_count(), m), elasticity);
  const auto at = MaterialTensorField::element_constant(random_fields(rng, mesh.element_count(), m), elasticity);
  RobinCoefficientField g3;
  RobinCoefficientField g3t;
  if (mesh.has_tag(BoundaryTag::Robin)) {
    g3 = RobinCoefficientField::constant(uniform(rng, 0.1, 3.0));
    g3t = RobinCoefficientField::constant(uniform(rng, 0.1, 3.0));
  }
  const Problem problem{elasticity ? Physics::Elasticity : Physics::Diffusion, mesh, a, at, g3, g3t, singular};
  t.order = problem.order();

  const BoundsResult bounds = problem_bounds(problem);
  const Pencil pencil = assemble_pencil(problem);
  const EigenDecomposition eig = solve_oracle(problem, pencil, false);
  const SpectrumReport rep = verify_bracketing(bounds, Spectrum{eig.values});
  t.bracketing = rep.pass;
  t.min_lower_margin = rep.min_lower_margin;
  t.min_upper_margin = rep.min_upper_margin;

  // Scaling the whole form by a power of two scales every bound exactly.
  Problem scaled = problem;
  scaled.a = problem.a.scaled(2.0);
  scaled.g3 = problem.g3.scaled(2.0);
  const BoundsResult sb = problem_bounds(scaled);
  for (std::size_t i = 0; i < bounds.size(); ++i)
    if (sb.lower_sorted[i] != 2.0 * bounds.lower_sorted[i] || sb.upper_sorted[i] != 2.0 * bounds.upper_sorted[i])
      t.scaling = false;

  Problem perfect = problem;
  perfect.at = problem.a;
  perfect.g3t = problem.g3;
  const BoundsResult pb = problem_bounds(perfect);
  const Pencil pp = assemble_pencil(perfect);
  const EigenDecomposition pe = solve_oracle(perfect, pp, false);
  t.perfect = all_close_to_one(pb.lower_sorted, 1e-10) && all_close_to_one(pb.upper_sorted, 1e-10) &&
              all_close_to_one(pe.values, 1e-10);
  return t;
}

}  // namespace

PropertySuiteResult run_property_suite(std::uint64_t seed, std::size_t count) {
  PropertySuiteResult out;
  out.seed = seed;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    out.trials.push_back(run_trial(rng, i));
    const auto& t = out.trials.back();
    out.pass = out.pass && t.bracketing && t.scaling && t.perfect;
  }
  return out;
}

SmallAgreementResult run_small_agreement(std::uint64_t seed, std::size_t count) {
  SmallAgreementResult out;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t m = pick(rng, 1, 6);
    const DenseSymMatrix a = random_spd(rng, m);
    const DenseSymMatrix b = random_spd(rng, m);
    const Spectrum small = gen_eig_small(a, b);
    const EigenDecomposition dense = gen_eig_dense(a, b);
    for (std::size_t k = 0; k < m; ++k) {
      const double dev = std::abs(small.values[k] - dense.values[k]) / std::max(1.0, std::abs(dense.values[k]));
      out.max_deviation = std::max(out.max_deviation, dev);
    }
    ++out.pencils;
  }
  out.pass = out.max_deviation <= 1e-10;
  return out;
}

nlohmann::ordered_json to_json(const PropertySuiteResult& r) {
  nlohmann::ordered_json j;
  j["seed"] = r.seed;
  j["trials"] = r.trials.size();
  j["pass"] = r.pass;
  auto& list = j["results"] = nlohmann::ordered_json::array();
  for (const auto& t : r.trials) {
    list.push_back({{"index", t.index},
                    {"physics", t.physics},
                    {"shape", t.shape},
                    {"n", t.n},
                    {"order", t.order},
                    {"bracketing", t.bracketing},
                    {"scaling", t.scaling},
                    {"perfect", t.perfect},
                    {"min_lower_margin", t.min_lower_margin},
                    {"min_upper_margin", t.min_upper_margin}});
  }
  return j;
}

nlohmann::ordered_json to_json(const SmallAgreementResult& r) {
  return {{"pencils", r.pencils}, {"max_deviation", r.max_deviation}, {"pass", r.pass}};
}

}  // namespace eigenbound
