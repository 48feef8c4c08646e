#include "eigenbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "eigenbound/errors.hpp"

namespace eigenbound {

namespace {

std::vector<std::size_t> stable_order(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return idx;
}

struct ElementRange {
  PencilRange range;
  bool certified = true;
};

ElementRange tensor_range(const Mesh& mesh, std::size_t e, const MaterialTensorField& a,
                          const MaterialTensorField& at) {
  const auto ha = a.range_hull(mesh, e);
  const auto hat = at.range_hull(mesh, e);
  PencilRange r;
  try {
    r = pencil_range(ha.vertices, hat.vertices);
  } catch (const DefinitenessError&) {
    throw DefinitenessError("preconditioner data is not positive definite on element " + std::to_string(e));
  }
  // A zero infimum can occur when ellipticity degenerates at a single point
  // of the element closure; a negative one cannot come from SPD data.
  if (r.lo < 0.0) throw DefinitenessError("coefficient data is not positive definite on element " + std::to_string(e));
  return {r, ha.certified && hat.certified};
}

}  // namespace

PencilRange pencil_range(const std::vector<DenseSymMatrix>& a_hull, const std::vector<DenseSymMatrix>& at_hull) {
  if (a_hull.empty() || at_hull.empty()) throw ContractError("empty coefficient hull");
  PencilRange out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& at : at_hull)
    for (const auto& a : a_hull) {
      const Spectrum s = gen_eig_small(a, at);
      out.lo = std::min(out.lo, s.values.front());
      out.hi = std::max(out.hi, s.values.back());
    }
  return out;
}

ElementAlpha element_alpha(const Mesh& mesh, std::size_t element, const MaterialTensorField& a,
                           const MaterialTensorField& at, const RobinCoefficientField& g3,
                           const RobinCoefficientField& g3t) {
  if (element >= mesh.element_count()) throw IndexError("element " + std::to_string(element) + " out of range");
  if (a.size() != at.size() || a.voigt() != at.voigt())
    throw ContractError("original and preconditioner fields differ in shape");
  const ElementRange tr = tensor_range(mesh, element, a, at);
  ElementAlpha out{element, tr.range.lo, tr.range.hi, tr.certified, false};
  for (std::size_t b : mesh.element_boundary(element)) {
    const BoundaryEdge& be = mesh.boundary_edges()[b];
    if (be.tag != BoundaryTag::Robin) continue;
    const auto ratio = robin_ratio_extremes(g3, g3t, mesh, be);
    if (!ratio) continue;
    out.alpha_min = std::min(out.alpha_min, ratio->lo);
    out.alpha_max = std::max(out.alpha_max, ratio->hi);
    out.certified = out.certified && ratio->certified;
    out.robin_branch = true;
  }
  return out;
}

BoundsResult sort_bounds(std::vector<double> lower, std::vector<double> upper, BoundsMode mode,
                         std::size_t replication, bool certified) {
  if (lower.size() != upper.size()) throw ContractError("bound sequences differ in length");
  BoundsResult out;
  out.r = stable_order(lower);
  out.s = stable_order(upper);
  out.lower_sorted.reserve(lower.size());
  out.upper_sorted.reserve(upper.size());
  for (std::size_t i = 0; i < lower.size(); ++i) {
    out.lower_sorted.push_back(lower[out.r[i]]);
    out.upper_sorted.push_back(upper[out.s[i]]);
  }
  out.lower = std::move(lower);
  out.upper = std::move(upper);
  out.mode = mode;
  out.replication = replication;
  out.certified = certified;
  return out;
}

BoundsResult diffusion_bounds(const Mesh& mesh, const MaterialTensorField& a, const MaterialTensorField& at,
                              const RobinCoefficientField& g3, const RobinCoefficientField& g3t, bool singular) {
  if (a.voigt() || at.voigt()) throw ContractError("diffusion bounds need tensor fields, not Voigt matrices");
  if (singular) {
    if (mesh.has_tag(BoundaryTag::Dirichlet))
      throw ContractError("singular mode needs a pure periodic/Neumann problem, but the mesh has Dirichlet edges");
    if (mesh.has_tag(BoundaryTag::Robin) && !(g3.is_zero() && g3t.is_zero()))
      throw ContractError("singular mode does not allow nonzero Robin coefficients");
  }
  std::vector<ElementAlpha> alphas;
  alphas.reserve(mesh.element_count());
  bool certified = true;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    alphas.push_back(element_alpha(mesh, e, a, at, g3, g3t));
    certified = certified && alphas.back().certified;
  }

  const std::size_t n = mesh.dof_count();
  std::vector<double> lower(n);
  std::vector<double> upper(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto patch = mesh.patch(k);
    if (patch.empty()) throw TopologyError("DOF " + std::to_string(k) + " has an empty patch");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t e : patch) {
      lo = std::min(lo, alphas[e].alpha_min);
      hi = std::max(hi, alphas[e].alpha_max);
    }
    lower[k] = lo;
    upper[k] = hi;
  }
  return sort_bounds(std::move(lower), std::move(upper), singular ? BoundsMode::SingularShift : BoundsMode::Regular,
                     1, certified);
}

BoundsResult elasticity_bounds(const Mesh& mesh, const MaterialTensorField& c, const MaterialTensorField& ct, int d) {
  if (d != 2 && d != 3) throw ContractError("elasticity bounds need d = 2 or 3");
  const std::size_t m = d == 2 ? 3 : 6;
  if (!c.voigt() || !ct.voigt() || c.size() != m || ct.size() != m)
    throw ContractError("elasticity bounds need " + std::to_string(m) + "x" + std::to_string(m) + " Voigt fields");

  std::vector<ElementRange> ranges;
  ranges.reserve(mesh.element_count());
  bool certified = true;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    ranges.push_back(tensor_range(mesh, e, c, ct));
    certified = certified && ranges.back().certified;
  }

  const std::size_t n = mesh.dof_count();
  const auto reps = static_cast<std::size_t>(d);
  std::vector<double> lower(reps * n);
  std::vector<double> upper(reps * n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto patch = mesh.patch(k);
    if (patch.empty()) throw TopologyError("DOF " + std::to_string(k) + " has an empty patch");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t e : patch) {
      lo = std::min(lo, ranges[e].range.lo);
      hi = std::max(hi, ranges[e].range.hi);
    }
    for (std::size_t c_ = 0; c_ < reps; ++c_) {
      lower[k * reps + c_] = lo;
      upper[k * reps + c_] = hi;
    }
  }
  return sort_bounds(std::move(lower), std::move(upper), BoundsMode::Regular, reps, certified);
}

SpectrumReport verify_bracketing(const BoundsResult& bounds, const Spectrum& spectrum) {
  const std::size_t n = bounds.size();
  const bool shifted = bounds.mode == BoundsMode::SingularShift;
  const std::size_t expected = shifted ? (n == 0 ? 0 : n - 1) : n;
  if (spectrum.values.size() != expected)
    throw ContractError("spectrum has " + std::to_string(spectrum.values.size()) + " values, bounds expect " +
                        std::to_string(expected));

  SpectrumReport rep;
  rep.mode = bounds.mode;
  rep.certified = bounds.certified;
  rep.min_lower_margin = std::numeric_limits<double>::infinity();
  rep.min_upper_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < expected; ++i) {
    IndexVerdict v;
    v.lambda = spectrum.values[i];
    if (shifted) {
      // Full index k = i + 2 pairs with lower_sorted[k-1] and upper_sorted[k] (1-based).
      v.k = i + 2;
      v.lower = bounds.lower_sorted[i];
      v.upper = bounds.upper_sorted[i + 1];
    } else {
      v.k = i + 1;
      v.lower = bounds.lower_sorted[i];
      v.upper = bounds.upper_sorted[i];
    }
    const double eps = 1e-9 * std::max(1.0, std::abs(v.lambda));
    v.ok = v.lower - eps <= v.lambda && v.lambda <= v.upper + eps;
    rep.min_lower_margin = std::min(rep.min_lower_margin, v.lambda - v.lower);
    rep.min_upper_margin = std::min(rep.min_upper_margin, v.upper - v.lambda);
    if (!v.ok) {
      rep.failures.push_back(v.k);
      rep.pass = false;
    }
    rep.entries.push_back(v);
  }
  if (expected == 0) rep.min_lower_margin = rep.min_upper_margin = 0.0;
  return rep;
}

}  // namespace eigenbound
