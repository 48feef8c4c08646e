#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace eigenbound {

class DenseSymMatrix;

/// Symmetric matrix in compressed-row storage. Both triangles are stored so
/// that products are a single pass over the rows.
class SymmetricSparseMatrix {
 public:
  struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
  };

  SymmetricSparseMatrix() = default;

  /// Duplicates are summed in the order they appear, so the result depends
  /// only on the triplet sequence. Off-diagonal triplets are mirrored.
  static SymmetricSparseMatrix from_upper_triplets(std::size_t n, std::vector<Triplet> upper);

  std::size_t order() const noexcept { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_index() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  double coeff(std::size_t i, std::size_t j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;

  double max_abs() const noexcept;
  /// max |M_ij - M_ji| over the stored pattern.
  double asymmetry() const;

  SymmetricSparseMatrix scaled(double factor) const;
  DenseSymMatrix to_dense() const;

 private:
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// Matrix Market coordinate/real/symmetric, lower triangle, 17 significant digits.
void write_matrix_market(std::ostream& out, const SymmetricSparseMatrix& m);

}  // namespace eigenbound
