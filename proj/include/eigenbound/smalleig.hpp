#pragma once

// Dense symmetric linear algebra: storage, Cholesky, and generalized
// eigenvalue problems A v = lambda B v with B symmetric positive definite.
// The dense solver is the reference oracle the eigenvalue bounds are checked
// against; it relies on nothing outside this file and its source.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace eigenbound {

class SymmetricSparseMatrix;

/// Square symmetric matrix, row-major, both triangles stored.
class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;
  explicit DenseSymMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  static DenseSymMatrix identity(std::size_t n);
  static DenseSymMatrix diagonal(std::span<const double> d);
  /// Throws ContractError unless rows form a symmetric square matrix.
  static DenseSymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseSymMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t order() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

  /// Sets M_ij and M_ji.
  void set(std::size_t i, std::size_t j, double v) noexcept {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }
  /// Adds to M_ij and, off the diagonal, to M_ji.
  void add(std::size_t i, std::size_t j, double v) noexcept {
    data_[i * n_ + j] += v;
    if (i != j) data_[j * n_ + i] += v;
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }

  DenseSymMatrix scaled(double c) const;
  double max_abs() const noexcept;
  double frobenius() const noexcept;
  std::vector<double> multiply(std::span<const double> x) const;

  friend bool operator==(const DenseSymMatrix&, const DenseSymMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Lower-triangular factor L with L L^T = M.
class CholeskyFactor {
 public:
  /// Throws DefinitenessError naming the 1-based pivot that is not positive.
  explicit CholeskyFactor(const DenseSymMatrix& m);

  std::size_t order() const noexcept { return n_; }
  double lower(std::size_t i, std::size_t j) const noexcept { return l_[i * n_ + j]; }

  /// Solves M x = b in place.
  void solve_in_place(std::span<double> b) const;
  std::vector<double> solve(std::span<const double> b) const;
  /// L y = b in place (forward substitution).
  void forward_in_place(std::span<double> b) const;
  /// L^T x = y in place (back substitution).
  void backward_in_place(std::span<double> y) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> l_;
};

/// Non-decreasing eigenvalues of a pencil.
struct Spectrum {
  std::vector<double> values;
};

/// Eigenpairs of a pencil; vectors[i] belongs to values[i] and is
/// B-orthonormal in the original coordinates.
struct EigenDecomposition {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi. Off-diagonal
/// Frobenius norm is driven below 1e-12 of the full norm, at most 30 sweeps.
/// When `vectors` is non-null it receives the eigenvectors as rows.
std::vector<double> jacobi_eigenvalues(DenseSymMatrix m, std::vector<double>* vectors = nullptr);

/// Eigenvalues of B^{-1} A for orders up to 6: Cholesky congruence, then a
/// closed form for order 2 and Jacobi otherwise.
Spectrum gen_eig_small(const DenseSymMatrix& a, const DenseSymMatrix& b);

struct DenseEigOptions {
  /// Restrict the pencil to the complement of a shared one-dimensional
  /// kernel spanned by the per-component constant vector.
  bool deflate_kernel = false;
  /// Number of solution components (kernel = constants per component block).
  std::size_t components = 1;
  bool want_vectors = false;
};

/// Full generalized spectrum of the pencil (A, B), the verification oracle.
EigenDecomposition gen_eig_dense(const DenseSymMatrix& a, const DenseSymMatrix& b,
                                 const DenseEigOptions& options = {});
Spectrum gen_eig_dense(const SymmetricSparseMatrix& a, const SymmetricSparseMatrix& b,
                       bool deflate_kernel = false);

/// Largest relative residual ||A v - lambda B v|| / ((||A|| + |lambda| ||B||) ||v||)
/// over all eigenpairs. Matrix norms are max absolute row sums, which bound
/// the spectral norm from above.
double max_relative_residual(const DenseSymMatrix& a, const DenseSymMatrix& b,
                             const EigenDecomposition& eig);

}  // namespace eigenbound
