#include "eigenbound/material.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "eigenbound/errors.hpp"
#include "eigenbound/fe.hpp"
#include "json.hpp"

namespace eigenbound {

struct MaterialTensorField::Impl {
  Kind kind = Kind::Constant;
  std::size_t size = 0;
  bool voigt = false;
  std::string name;
  std::vector<DenseSymMatrix> values;
  Evaluator evaluator;
  RangeEvaluator range;
  DiscontinuityProbe discontinuity;
};

namespace {

void check_size(std::size_t size, bool voigt) {
  if (voigt ? (size != 3 && size != 6) : (size != 2 && size != 3))
    throw ContractError(voigt ? "Voigt matrices must be 3x3 or 6x6" : "diffusion tensors must be 2x2 or 3x3");
}

void check_spd(const DenseSymMatrix& m, const std::string& what) {
  try {
    CholeskyFactor chol(m);
  } catch (const DefinitenessError&) {
    throw DefinitenessError(what + " is not positive definite");
  }
}

double sign_nonnegative(double t) { return t >= 0.0 ? 1.0 : -1.0; }

double tolerance_for(double a, double b) { return 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

// Sign pattern of x1 * x2 over the interior of an axis-aligned box.
SignSet product_signs(const Rectangle& box) {
  const double tx = tolerance_for(box.x0, box.x1);
  const double ty = tolerance_for(box.y0, box.y1);
  const bool xp = box.x1 > tx;
  const bool xn = box.x0 < -tx;
  const bool yp = box.y1 > ty;
  const bool yn = box.y0 < -ty;
  return {(xp && yn) || (xn && yp), (xp && yp) || (xn && yn)};
}

DenseSymMatrix ex41_tensor(double s, double c) {
  const double diag = 1.0 + 0.3 * s;
  const double off = 0.3 + 0.1 * c;
  return DenseSymMatrix::from_rows({{diag, off}, {off, diag}});
}

MaterialTensorField make_ex41_a() {
  auto evaluator = [](std::size_t, Point x) { return ex41_tensor(sign_nonnegative(std::sin(x.y)), std::cos(x.x)); };
  // A is affine in cos(x1) for a fixed sign, so the hull vertices are the
  // sign/cos-extreme combinations over the element's bounding box.
  auto range = [](const Mesh& mesh, std::size_t e) {
    const Rectangle box = mesh.element_box(e);
    const SignSet signs = sin_signs(box.y0, box.y1);
    const auto [cmin, cmax] = cos_range(box.x0, box.x1);
    std::vector<DenseSymMatrix> hull;
    for (double s : {-1.0, 1.0}) {
      if ((s < 0 && !signs.negative) || (s > 0 && !signs.positive)) continue;
      hull.push_back(ex41_tensor(s, cmin));
      if (cmax != cmin) hull.push_back(ex41_tensor(s, cmax));
    }
    return hull;
  };
  auto jump = [](const Mesh& mesh, std::size_t e) {
    const Rectangle box = mesh.element_box(e);
    const SignSet signs = sin_signs(box.y0, box.y1);
    return signs.negative && signs.positive;
  };
  return MaterialTensorField::closed_form("ex41-A", 2, false, evaluator, range, jump);
}

MaterialTensorField make_ex45_c() {
  const DenseSymMatrix base = voigt_isotropic(1.0, 0.2, 2);
  auto evaluator = [base](std::size_t, Point x) { return base.scaled(1.0 + 0.3 * sign_nonnegative(x.x * x.y)); };
  auto range = [base](const Mesh& mesh, std::size_t e) {
    const SignSet signs = product_signs(mesh.element_box(e));
    std::vector<DenseSymMatrix> hull;
    if (signs.negative) hull.push_back(base.scaled(0.7));
    if (signs.positive) hull.push_back(base.scaled(1.3));
    return hull;
  };
  auto jump = [](const Mesh& mesh, std::size_t e) {
    const SignSet signs = product_signs(mesh.element_box(e));
    return signs.negative && signs.positive;
  };
  return MaterialTensorField::closed_form("ex45-C", 3, true, evaluator, range, jump);
}

MaterialTensorField make_ex46_a() {
  auto evaluator = [](std::size_t, Point x) { return DenseSymMatrix::identity(2).scaled(std::sin(x.x + x.y)); };
  // x1 + x2 is linear, so its extremes over a convex element sit at vertices.
  auto range = [](const Mesh& mesh, std::size_t e) {
    const auto& el = mesh.elements()[e];
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < el.vertex_count(); ++i) {
      const Point& p = mesh.vertices()[el.vertices[i]];
      lo = std::min(lo, p.x + p.y);
      hi = std::max(hi, p.x + p.y);
    }
    const auto [smin, smax] = sin_range(lo, hi);
    std::vector<DenseSymMatrix> hull{DenseSymMatrix::identity(2).scaled(smin)};
    if (smax != smin) hull.push_back(DenseSymMatrix::identity(2).scaled(smax));
    return hull;
  };
  return MaterialTensorField::closed_form("ex46-A", 2, false, evaluator, range);
}

}  // namespace

SignSet sin_signs(double a, double b) {
  SignSet out;
  const double tol = tolerance_for(a, b);
  const auto k0 = static_cast<long long>(std::floor(a / std::numbers::pi)) - 1;
  const auto k1 = static_cast<long long>(std::ceil(b / std::numbers::pi)) + 1;
  for (long long k = k0; k <= k1; ++k) {
    const double lo = std::max(a, static_cast<double>(k) * std::numbers::pi);
    const double hi = std::min(b, static_cast<double>(k + 1) * std::numbers::pi);
    if (hi - lo <= tol) continue;
    if (((k % 2) + 2) % 2 == 0) {
      out.positive = true;
    } else {
      out.negative = true;
    }
  }
  return out;
}

std::pair<double, double> cos_range(double a, double b) {
  double lo = std::min(std::cos(a), std::cos(b));
  double hi = std::max(std::cos(a), std::cos(b));
  const auto k0 = static_cast<long long>(std::ceil(a / std::numbers::pi));
  const auto k1 = static_cast<long long>(std::floor(b / std::numbers::pi));
  for (long long k = k0; k <= k1; ++k) {
    if (((k % 2) + 2) % 2 == 0) {
      hi = 1.0;
    } else {
      lo = -1.0;
    }
  }
  return {lo, hi};
}

std::pair<double, double> sin_range(double a, double b) {
  double lo = std::min(std::sin(a), std::sin(b));
  double hi = std::max(std::sin(a), std::sin(b));
  // Interior critical points pi/2 + k pi; shifting the endpoints keeps sin(0) exact.
  const auto k0 = static_cast<long long>(std::ceil((a - 0.5 * std::numbers::pi) / std::numbers::pi));
  const auto k1 = static_cast<long long>(std::floor((b - 0.5 * std::numbers::pi) / std::numbers::pi));
  for (long long k = k0; k <= k1; ++k) {
    if (((k % 2) + 2) % 2 == 0) {
      hi = 1.0;
    } else {
      lo = -1.0;
    }
  }
  return {lo, hi};
}

MaterialTensorField MaterialTensorField::constant(DenseSymMatrix value, bool voigt, std::string name) {
  check_size(value.order(), voigt);
  check_spd(value, "constant field '" + name + "'");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Constant;
  impl->size = value.order();
  impl->voigt = voigt;
  impl->name = std::move(name);
  impl->values.push_back(std::move(value));
  return MaterialTensorField(std::move(impl));
}

MaterialTensorField MaterialTensorField::element_constant(std::vector<DenseSymMatrix> values, bool voigt,
                                                          std::string name) {
  if (values.empty()) throw ContractError("element-constant field needs at least one value");
  const std::size_t size = values.front().order();
  check_size(size, voigt);
  for (std::size_t e = 0; e < values.size(); ++e) {
    if (values[e].order() != size) throw ContractError("element-constant values differ in size");
    check_spd(values[e], "value of element " + std::to_string(e));
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::ElementConstant;
  impl->size = size;
  impl->voigt = voigt;
  impl->name = std::move(name);
  impl->values = std::move(values);
  return MaterialTensorField(std::move(impl));
}

MaterialTensorField MaterialTensorField::closed_form(std::string name, std::size_t size, bool voigt,
                                                     Evaluator evaluator, RangeEvaluator range,
                                                     DiscontinuityProbe discontinuity) {
  check_size(size, voigt);
  if (!evaluator) throw ContractError("closed-form field needs an evaluator");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::ClosedForm;
  impl->size = size;
  impl->voigt = voigt;
  impl->name = std::move(name);
  impl->evaluator = std::move(evaluator);
  impl->range = std::move(range);
  impl->discontinuity = std::move(discontinuity);
  return MaterialTensorField(std::move(impl));
}

MaterialTensorField MaterialTensorField::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ParameterError(std::string("invalid field JSON: ") + ex.what());
  }
  auto matrix = [](const nlohmann::json& m) {
    if (!m.is_array()) throw ParameterError("field matrix must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& r : m) rows.push_back(r.get<std::vector<double>>());
    return DenseSymMatrix::from_rows(rows);
  };
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const bool voigt = j.contains("m");
    const std::size_t size = j.at(voigt ? "m" : "d").get<std::size_t>();
    const std::string name = j.value("name", kind);
    if (kind == "constant") {
      auto value = matrix(j.at("value"));
      if (value.order() != size) throw ParameterError("field value does not match declared size");
      return constant(std::move(value), voigt, name);
    }
    if (kind == "element_constant") {
      std::vector<DenseSymMatrix> values;
      for (const auto& m : j.at("values")) {
        values.push_back(matrix(m));
        if (values.back().order() != size) throw ParameterError("field value does not match declared size");
      }
      return element_constant(std::move(values), voigt, name);
    }
    throw ParameterError("unsupported field kind '" + kind + "'");
  } catch (const nlohmann::json::exception& ex) {
    throw ParameterError(std::string("invalid field JSON: ") + ex.what());
  }
}

MaterialTensorField::Kind MaterialTensorField::kind() const noexcept { return impl_->kind; }
std::size_t MaterialTensorField::size() const noexcept { return impl_->size; }
bool MaterialTensorField::voigt() const noexcept { return impl_->voigt; }
const std::string& MaterialTensorField::name() const noexcept { return impl_->name; }
std::size_t MaterialTensorField::element_values() const noexcept {
  return impl_->kind == Kind::ElementConstant ? impl_->values.size() : 0;
}

DenseSymMatrix MaterialTensorField::evaluate(std::size_t element, Point x) const {
  switch (impl_->kind) {
    case Kind::Constant:
      return impl_->values.front();
    case Kind::ElementConstant:
      if (element >= impl_->values.size())
        throw IndexError("field '" + impl_->name + "' has no value for element " + std::to_string(element));
      return impl_->values[element];
    case Kind::ClosedForm: {
      DenseSymMatrix m = impl_->evaluator(element, x);
      if (m.order() != impl_->size) throw ContractError("field '" + impl_->name + "' returned a matrix of wrong size");
      return m;
    }
  }
  return {};
}

bool MaterialTensorField::has_certified_range() const noexcept {
  return impl_->kind != Kind::ClosedForm || static_cast<bool>(impl_->range);
}

MaterialTensorField::Hull MaterialTensorField::range_hull(const Mesh& mesh, std::size_t element) const {
  if (element >= mesh.element_count()) throw IndexError("element " + std::to_string(element) + " out of range");
  switch (impl_->kind) {
    case Kind::Constant:
      return {{impl_->values.front()}, true};
    case Kind::ElementConstant:
      return {{evaluate(element, {})}, true};
    case Kind::ClosedForm:
      break;
  }
  if (impl_->range) {
    Hull h{impl_->range(mesh, element), true};
    if (h.vertices.empty()) throw ContractError("range evaluator of '" + impl_->name + "' returned no values");
    return h;
  }
  Hull h{{}, false};
  const auto& el = mesh.elements()[element];
  for (const auto& r : fe::sample_points(el.shape)) h.vertices.push_back(evaluate(element, fe::to_physical(mesh, el, r)));
  return h;
}

bool MaterialTensorField::discontinuous_on(const Mesh& mesh, std::size_t element) const {
  return impl_->discontinuity && impl_->discontinuity(mesh, element);
}

MaterialTensorField MaterialTensorField::scaled(double factor) const {
  if (!(factor > 0.0)) throw ParameterError("fields can only be scaled by a positive factor");
  auto impl = std::make_shared<Impl>(*impl_);
  for (auto& v : impl->values) v = v.scaled(factor);
  if (impl_->evaluator) {
    impl->evaluator = [inner = impl_->evaluator, factor](std::size_t e, Point x) { return inner(e, x).scaled(factor); };
  }
  if (impl_->range) {
    impl->range = [inner = impl_->range, factor](const Mesh& mesh, std::size_t e) {
      auto hull = inner(mesh, e);
      for (auto& m : hull) m = m.scaled(factor);
      return hull;
    };
  }
  return MaterialTensorField(std::move(impl));
}

std::shared_ptr<const RobinShape> robin_shape_one() {
  static const auto shape = std::make_shared<const RobinShape>(RobinShape{
      "one", [](Point) { return 1.0; },
      [](Point, Point) { return std::optional<std::pair<double, double>>({1.0, 1.0}); }});
  return shape;
}

std::shared_ptr<const RobinShape> robin_shape_one_plus_y_squared() {
  static const auto shape = std::make_shared<const RobinShape>(RobinShape{
      "one_plus_y2", [](Point p) { return 1.0 + p.y * p.y; },
      [](Point a, Point b) {
        const double lo = std::min(a.y, b.y);
        const double hi = std::max(a.y, b.y);
        const double sq_max = std::max(lo * lo, hi * hi);
        const double sq_min = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(lo * lo, hi * hi);
        return std::optional<std::pair<double, double>>({1.0 + sq_min, 1.0 + sq_max});
      }});
  return shape;
}

RobinCoefficientField RobinCoefficientField::constant(double value) { return shaped(value, robin_shape_one()); }

RobinCoefficientField RobinCoefficientField::shaped(double scale, std::shared_ptr<const RobinShape> shape) {
  if (!(scale >= 0.0)) throw ParameterError("Robin coefficient must be non-negative");
  RobinCoefficientField f;
  f.scale_ = scale;
  f.shape_ = std::move(shape);
  return f;
}

double RobinCoefficientField::evaluate(Point x) const { return is_zero() ? 0.0 : scale_ * shape_->value(x); }

std::optional<std::pair<double, double>> RobinCoefficientField::segment_range(Point a, Point b) const {
  if (is_zero()) return std::pair{0.0, 0.0};
  if (!shape_->segment_range) return std::nullopt;
  auto r = shape_->segment_range(a, b);
  if (!r) return std::nullopt;
  return std::pair{scale_ * r->first, scale_ * r->second};
}

RobinCoefficientField RobinCoefficientField::scaled(double factor) const {
  if (!(factor >= 0.0)) throw ParameterError("Robin coefficient must be non-negative");
  RobinCoefficientField f = *this;
  f.scale_ *= factor;
  return f;
}

std::optional<RatioRange> robin_ratio_extremes(const RobinCoefficientField& g3, const RobinCoefficientField& g3t,
                                               const Mesh& mesh, const BoundaryEdge& edge) {
  if (edge.tag != BoundaryTag::Robin) throw ContractError("Robin ratio requested on a non-ROBIN edge");
  const auto [va, vb] = mesh.elements()[edge.element].edge(edge.local_edge);
  const Point a = mesh.vertices()[va];
  const Point b = mesh.vertices()[vb];

  if (g3.is_zero() && g3t.is_zero()) return std::nullopt;
  if (g3.is_zero() || g3t.is_zero())
    throw IllPosedRatioError("Robin coefficients must vanish together; edge of element " +
                             std::to_string(edge.element) + " has only one of them zero");
  if (g3.shape() == g3t.shape()) {
    const double r = g3.scale() / g3t.scale();
    return RatioRange{r, r, true};
  }

  const auto r3 = g3.segment_range(a, b);
  const auto rt = g3t.segment_range(a, b);
  if (r3 && r3->second == 0.0) {
    if (rt && rt->second == 0.0) return std::nullopt;
    throw IllPosedRatioError("g3 vanishes on an edge of element " + std::to_string(edge.element) +
                             " where the preconditioner coefficient does not");
  }
  if (r3 && rt) {
    if (!(rt->first > 0.0))
      throw IllPosedRatioError("preconditioner Robin coefficient may vanish on an edge of element " +
                               std::to_string(edge.element));
    return RatioRange{r3->first / rt->second, r3->second / rt->first, true};
  }

  RatioRange out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), false};
  bool any = false;
  for (int i = 0; i <= 10; ++i) {
    const double t = i / 10.0;
    const Point p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    const double num = g3.evaluate(p);
    const double den = g3t.evaluate(p);
    if (num == 0.0) continue;
    if (!(den > 0.0))
      throw IllPosedRatioError("g3 is nonzero where the preconditioner coefficient vanishes (element " +
                               std::to_string(edge.element) + ")");
    out.lo = std::min(out.lo, num / den);
    out.hi = std::max(out.hi, num / den);
    any = true;
  }
  if (!any) return std::nullopt;
  return out;
}

DenseSymMatrix voigt_isotropic(double young, double poisson, int d) {
  if (!(young > 0.0)) throw ParameterError("Young modulus must be positive");
  if (!(poisson > -1.0 && poisson < 0.5)) throw ParameterError("Poisson ratio must lie in (-1, 1/2)");
  if (d != 2 && d != 3) throw ParameterError("dimension must be 2 or 3");
  const double f = young / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  const double c11 = f * (1.0 - poisson);
  const double c12 = f * poisson;
  const double c44 = f * 0.5 * (1.0 - 2.0 * poisson);
  return voigt_cubic(c11, c12, c44, d);
}

DenseSymMatrix voigt_cubic(double c11, double c12, double c44, int d) {
  if (d != 2 && d != 3) throw ParameterError("dimension must be 2 or 3");
  if (!(c11 > c12) || !(c11 + 2.0 * c12 > 0.0) || !(c44 > 0.0))
    throw ParameterError("cubic constants must satisfy c11 > c12, c11 + 2 c12 > 0, c44 > 0");
  const std::size_t normal = d == 2 ? 2 : 3;
  const std::size_t m = d == 2 ? 3 : 6;
  DenseSymMatrix c(m);
  for (std::size_t i = 0; i < normal; ++i) {
    c.set(i, i, c11);
    for (std::size_t j = i + 1; j < normal; ++j) c.set(i, j, c12);
  }
  for (std::size_t i = normal; i < m; ++i) c.set(i, i, c44);
  return c;
}

MaterialTensorField example_field(std::string_view name) {
  if (name == "ex41-A") return make_ex41_a();
  if (name == "ex41-Atilde1") return MaterialTensorField::constant(DenseSymMatrix::identity(2), false, "ex41-Atilde1");
  if (name == "ex41-Atilde2")
    return MaterialTensorField::constant(DenseSymMatrix::from_rows({{1.0, 0.3}, {0.3, 1.0}}), false, "ex41-Atilde2");
  if (name == "ex45-C") return make_ex45_c();
  if (name == "ex45-Ctilde1") return MaterialTensorField::constant(voigt_isotropic(1.0, 0.0, 2), true, "ex45-Ctilde1");
  if (name == "ex45-Ctilde2") return MaterialTensorField::constant(voigt_isotropic(1.0, 0.2, 2), true, "ex45-Ctilde2");
  if (name == "ex46-A") return make_ex46_a();
  if (name == "ex46-I") return MaterialTensorField::constant(DenseSymMatrix::identity(2), false, "ex46-I");
  if (name == "diag21-A")
    return MaterialTensorField::constant(DenseSymMatrix::from_rows({{2.0, 0.0}, {0.0, 1.0}}), false, "diag21-A");
  throw LookupError("unknown example field '" + std::string(name) + "'");
}

std::vector<std::string> example_field_names() {
  return {"ex41-A", "ex41-Atilde1", "ex41-Atilde2", "ex45-C", "ex45-Ctilde1",
          "ex45-Ctilde2", "ex46-A", "ex46-I", "diag21-A"};
}

RobinCoefficientField example_robin_field(std::string_view name) {
  if (name == "ex41c-g3") return RobinCoefficientField::shaped(1.0, robin_shape_one_plus_y_squared());
  if (name == "zero") return RobinCoefficientField::zero();
  throw LookupError("unknown Robin field '" + std::string(name) + "'");
}

}  // namespace eigenbound
