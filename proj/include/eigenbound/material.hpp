#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eigenbound/mesh.hpp"
#include "eigenbound/smalleig.hpp"

namespace eigenbound {

/// Symmetric positive definite coefficient field: a d x d diffusion tensor
/// A(x) or an m x m Voigt elasticity matrix C(x).
///
/// Besides point evaluation a field can describe its range on an element as
/// a finite set of matrices whose convex hull contains every value the field
/// takes there. Constant and element-constant fields know this exactly;
/// closed-form fields must supply a range evaluator to be certified and
/// otherwise fall back to sampling.
class MaterialTensorField {
 public:
  enum class Kind { Constant, ElementConstant, ClosedForm };

  using Evaluator = std::function<DenseSymMatrix(std::size_t element, Point x)>;
  using RangeEvaluator = std::function<std::vector<DenseSymMatrix>(const Mesh& mesh, std::size_t element)>;
  using DiscontinuityProbe = std::function<bool(const Mesh& mesh, std::size_t element)>;

  struct Hull {
    std::vector<DenseSymMatrix> vertices;
    bool certified = true;
  };

  static MaterialTensorField constant(DenseSymMatrix value, bool voigt = false, std::string name = "constant");
  static MaterialTensorField element_constant(std::vector<DenseSymMatrix> values, bool voigt = false,
                                              std::string name = "element_constant");
  static MaterialTensorField closed_form(std::string name, std::size_t size, bool voigt, Evaluator evaluator,
                                         RangeEvaluator range = {}, DiscontinuityProbe discontinuity = {});
  /// {"kind":"constant","d":2,"value":[[..],[..]]} or
  /// {"kind":"element_constant","d":2,"values":[[[..],[..]], ...]}; "m" in
  /// place of "d" marks a Voigt matrix.
  static MaterialTensorField from_json(std::string_view text);

  Kind kind() const noexcept;
  /// d for diffusion tensors, m for Voigt matrices.
  std::size_t size() const noexcept;
  bool voigt() const noexcept;
  const std::string& name() const noexcept;
  /// Number of per-element values for ELEMENT_CONSTANT fields, 0 otherwise.
  std::size_t element_values() const noexcept;

  DenseSymMatrix evaluate(std::size_t element, Point x) const;
  bool has_certified_range() const noexcept;
  Hull range_hull(const Mesh& mesh, std::size_t element) const;
  /// True when the field jumps inside the element, so quadrature should be refined.
  bool discontinuous_on(const Mesh& mesh, std::size_t element) const;

  MaterialTensorField scaled(double factor) const;

 private:
  struct Impl;
  explicit MaterialTensorField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Non-negative shape function for Robin coefficients, with an optional
/// certified range on a boundary segment.
struct RobinShape {
  std::string name;
  std::function<double(Point)> value;
  std::function<std::optional<std::pair<double, double>>(Point, Point)> segment_range;
};

std::shared_ptr<const RobinShape> robin_shape_one();
/// 1 + y^2.
std::shared_ptr<const RobinShape> robin_shape_one_plus_y_squared();

/// g(x) = scale * shape(x), or identically zero.
class RobinCoefficientField {
 public:
  RobinCoefficientField() = default;
  static RobinCoefficientField zero() { return {}; }
  static RobinCoefficientField constant(double value);
  static RobinCoefficientField shaped(double scale, std::shared_ptr<const RobinShape> shape);

  bool is_zero() const noexcept { return scale_ == 0.0 || !shape_; }
  double scale() const noexcept { return scale_; }
  const RobinShape* shape() const noexcept { return shape_.get(); }
  double evaluate(Point x) const;
  std::optional<std::pair<double, double>> segment_range(Point a, Point b) const;
  RobinCoefficientField scaled(double factor) const;

 private:
  double scale_ = 0.0;
  std::shared_ptr<const RobinShape> shape_;
};

struct RatioRange {
  double lo = 1.0;
  double hi = 1.0;
  bool certified = true;
};

/// Essential extremes of g3 / g3~ over a ROBIN edge; nullopt when both
/// coefficients vanish there. Throws IllPosedRatioError when exactly one of
/// them vanishes or g3~ may vanish where g3 does not.
std::optional<RatioRange> robin_ratio_extremes(const RobinCoefficientField& g3, const RobinCoefficientField& g3t,
                                               const Mesh& mesh, const BoundaryEdge& edge);

/// Isotropic Voigt matrix; d = 2 gives the plane-strain 3x3 matrix, d = 3 the 6x6 one.
DenseSymMatrix voigt_isotropic(double young, double poisson, int d);
/// Cubic symmetry: c11 on normal diagonals, c12 between normals, c44 on shear diagonals.
DenseSymMatrix voigt_cubic(double c11, double c12, double c44, int d);

/// Registered example coefficient fields. Names:
///   ex41-A, ex41-Atilde1, ex41-Atilde2,
///   ex45-C, ex45-Ctilde1, ex45-Ctilde2,
///   ex46-A, ex46-I, diag21-A
MaterialTensorField example_field(std::string_view name);
std::vector<std::string> example_field_names();
/// Registered Robin coefficients: ex41c-g3 (1 + x2^2), zero.
RobinCoefficientField example_robin_field(std::string_view name);

/// Signs of sin over the open interval (a, b), ignoring zero-measure pieces.
struct SignSet {
  bool negative = false;
  bool positive = false;
};
SignSet sin_signs(double a, double b);
/// Exact range of cos / sin over [a, b].
std::pair<double, double> cos_range(double a, double b);
std::pair<double, double> sin_range(double a, double b);

}  // namespace eigenbound
