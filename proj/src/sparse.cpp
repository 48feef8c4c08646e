#include "eigenbound/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "eigenbound/errors.hpp"
#include "eigenbound/smalleig.hpp"

namespace eigenbound {

SymmetricSparseMatrix SymmetricSparseMatrix::from_upper_triplets(std::size_t n, std::vector<Triplet> upper) {
  std::vector<Triplet> all;
  all.reserve(2 * upper.size());
  for (const auto& t : upper) {
    if (t.row >= n || t.col >= n) throw IndexError("triplet index outside matrix order");
    all.push_back(t);
    if (t.row != t.col) all.push_back({t.col, t.row, t.value});
  }
  std::stable_sort(all.begin(), all.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SymmetricSparseMatrix m;
  m.row_ptr_.assign(n + 1, 0);
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < all.size() && all[j].row == all[i].row && all[j].col == all[i].col) sum += all[j++].value;
    m.col_idx_.push_back(all[i].col);
    m.values_.push_back(sum);
    ++m.row_ptr_[all[i].row + 1];
    i = j;
  }
  for (std::size_t r = 0; r < n; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

double SymmetricSparseMatrix::coeff(std::size_t i, std::size_t j) const {
  if (i >= order() || j >= order()) throw IndexError("matrix index out of range");
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void SymmetricSparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = order();
  if (x.size() != n || y.size() != n) throw ContractError("dimension mismatch in sparse product");
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) sum += values_[k] * x[col_idx_[k]];
    y[i] = sum;
  }
}

std::vector<double> SymmetricSparseMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(order());
  multiply(x, y);
  return y;
}

double SymmetricSparseMatrix::max_abs() const noexcept {
  double best = 0.0;
  for (double v : values_) best = std::max(best, std::abs(v));
  return best;
}

double SymmetricSparseMatrix::asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < order(); ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      worst = std::max(worst, std::abs(values_[k] - coeff(col_idx_[k], i)));
  return worst;
}

SymmetricSparseMatrix SymmetricSparseMatrix::scaled(double factor) const {
  SymmetricSparseMatrix m = *this;
  for (double& v : m.values_) v *= factor;
  return m;
}

DenseSymMatrix SymmetricSparseMatrix::to_dense() const {
  DenseSymMatrix d(order());
  for (std::size_t i = 0; i < order(); ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_idx_[k] >= i) d.set(i, col_idx_[k], values_[k]);
  return d;
}

void write_matrix_market(std::ostream& out, const SymmetricSparseMatrix& m) {
  std::size_t lower = 0;
  for (std::size_t i = 0; i < m.order(); ++i)
    for (std::size_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k)
      if (m.col_index()[k] <= i) ++lower;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m.order() << ' ' << m.order() << ' ' << lower << '\n';
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  for (std::size_t i = 0; i < m.order(); ++i)
    for (std::size_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k)
      if (m.col_index()[k] <= i) out << i + 1 << ' ' << m.col_index()[k] + 1 << ' ' << m.values()[k] << '\n';
  out.flags(old_flags);
  out.precision(old_precision);
}

}  // namespace eigenbound
