#pragma once

// Two-sided bounds on every eigenvalue of a preconditioned FE pencil.
//
// Each element gets the extreme eigenvalues of A~^{-1}(x) A(x) over the
// element (merged with g3/g3~ on its Robin edges); each DOF takes the min and
// max of those over its patch; the two per-DOF sequences sorted
// non-decreasingly bracket the ordered eigenvalues index by index. For
// vector problems the per-patch values are repeated once per component
// before sorting.

#include <cstddef>
#include <vector>

#include "eigenbound/material.hpp"
#include "eigenbound/mesh.hpp"
#include "eigenbound/smalleig.hpp"

namespace eigenbound {

struct ElementAlpha {
  std::size_t element = 0;
  double alpha_min = 1.0;
  double alpha_max = 1.0;
  bool certified = true;
  /// Set when a Robin edge with nonzero coefficients contributed.
  bool robin_branch = false;
};

enum class BoundsMode { Regular, SingularShift };

struct BoundsResult {
  /// Per-DOF bounds; for vector problems index k*d + c repeats patch k.
  std::vector<double> lower;
  std::vector<double> upper;
  /// Sorting bijections: lower_sorted[i] == lower[r[i]], upper_sorted[i] == upper[s[i]].
  std::vector<std::size_t> r;
  std::vector<std::size_t> s;
  std::vector<double> lower_sorted;
  std::vector<double> upper_sorted;
  BoundsMode mode = BoundsMode::Regular;
  std::size_t replication = 1;
  bool certified = true;

  std::size_t size() const noexcept { return lower.size(); }
};

/// Extreme eigenvalues of the m x m pencils over two coefficient hulls.
/// Both extremes are attained at hull vertices because lambda_min is concave
/// and lambda_max convex along each factor of the pencil.
struct PencilRange {
  double lo = 1.0;
  double hi = 1.0;
};
PencilRange pencil_range(const std::vector<DenseSymMatrix>& a_hull, const std::vector<DenseSymMatrix>& at_hull);

ElementAlpha element_alpha(const Mesh& mesh, std::size_t element, const MaterialTensorField& a,
                           const MaterialTensorField& at, const RobinCoefficientField& g3,
                           const RobinCoefficientField& g3t);

/// Stable sort of both sequences; ties keep DOF order.
BoundsResult sort_bounds(std::vector<double> lower, std::vector<double> upper, BoundsMode mode,
                         std::size_t replication, bool certified);

/// `singular` selects the shifted pairing for pure periodic/Neumann problems.
BoundsResult diffusion_bounds(const Mesh& mesh, const MaterialTensorField& a, const MaterialTensorField& at,
                              const RobinCoefficientField& g3, const RobinCoefficientField& g3t, bool singular);

BoundsResult elasticity_bounds(const Mesh& mesh, const MaterialTensorField& c, const MaterialTensorField& ct,
                               int d = 2);

struct IndexVerdict {
  std::size_t k = 0;  // 1-based index into the full ordered spectrum
  double lambda = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool ok = true;
};

struct SpectrumReport {
  std::vector<IndexVerdict> entries;
  std::vector<std::size_t> failures;  // k of every failed entry
  bool pass = true;
  bool certified = true;
  BoundsMode mode = BoundsMode::Regular;
  double min_lower_margin = 0.0;  // min lambda_k - lower
  double min_upper_margin = 0.0;  // min upper - lambda_k
};

/// Checks lower_sorted[k] - eps <= lambda_k <= upper_sorted[k] + eps with
/// eps = 1e-9 max(1, |lambda_k|). In SINGULAR_SHIFT mode the spectrum omits
/// the kernel and lambda_k (k >= 2) is paired with lower_sorted[k-1].
SpectrumReport verify_bracketing(const BoundsResult& bounds, const Spectrum& spectrum);

}  // namespace eigenbound
