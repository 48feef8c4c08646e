#include "eigenbound/smalleig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "eigenbound/errors.hpp"
#include "eigenbound/sparse.hpp"

namespace eigenbound {

namespace {

constexpr int kMaxSweeps = 30;
constexpr double kOffTolerance = 1e-12;

double inf_norm(const DenseSymMatrix& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.order(); ++i) {
    double sum = 0.0;
    for (double v : m.row(i)) sum += std::abs(v);
    best = std::max(best, sum);
  }
  return best;
}

// Row-major n x n buffer with C = L^{-1} M L^{-T}. Both products are forward
// substitutions over rows, which keeps the inner loops contiguous.
std::vector<double> congruence(const CholeskyFactor& chol, std::span<const double> m, std::size_t n) {
  std::vector<double> x(m.begin(), m.end());
  auto forward_rows = [&](std::vector<double>& buf) {
    for (std::size_t i = 0; i < n; ++i) {
      double* xi = buf.data() + i * n;
      for (std::size_t j = 0; j < i; ++j) {
        const double lij = chol.lower(i, j);
        if (lij == 0.0) continue;
        const double* xj = buf.data() + j * n;
        for (std::size_t k = 0; k < n; ++k) xi[k] -= lij * xj[k];
      }
      const double inv = 1.0 / chol.lower(i, i);
      for (std::size_t k = 0; k < n; ++k) xi[k] *= inv;
    }
  };
  forward_rows(x);  // X = L^{-1} M
  std::vector<double> xt(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) xt[j * n + i] = x[i * n + j];
  forward_rows(xt);  // L^{-1} X^T = C^T = C
  // Symmetrize away rounding noise.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (xt[i * n + j] + xt[j * n + i]);
      xt[i * n + j] = avg;
      xt[j * n + i] = avg;
    }
  return xt;
}

void sort_pairs(std::vector<double>& values, std::vector<double>* vectors, std::size_t n) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> sorted(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = values[order[i]];
  values = std::move(sorted);
  if (vectors) {
    std::vector<double> v(vectors->size());
    for (std::size_t i = 0; i < order.size(); ++i)
      std::copy_n(vectors->data() + order[i] * n, n, v.data() + i * n);
    *vectors = std::move(v);
  }
}

// Cyclic Jacobi on a row-major symmetric buffer. Rows of `w` (if any)
// accumulate the eigenvectors.
std::vector<double> jacobi_in_place(std::vector<double>& a, std::size_t n, std::vector<double>* w) {
  if (w) {
    w->assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) (*w)[i * n + i] = 1.0;
  }
  double total = 0.0;
  for (double v : a) total += v * v;
  const double target = kOffTolerance * std::sqrt(total);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    if (std::sqrt(2.0 * off) <= target) break;
    // Early sweeps skip small entries; later sweeps rotate everything.
    const double threshold = sweep < 3 ? 0.2 * std::sqrt(off) / static_cast<double>(n * n) : 0.0;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          a[p * n + q] = 0.0;
          a[q * n + p] = 0.0;
          continue;
        }
        if (std::abs(apq) <= threshold || apq == 0.0) continue;

        const double h = aqq - app;
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = apq / h;
        } else {
          const double theta = 0.5 * h / apq;
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        double* rp = a.data() + p * n;
        double* rq = a.data() + q * n;
        for (std::size_t k = 0; k < n; ++k) {
          const double x = rp[k];
          const double y = rq[k];
          rp[k] = x - s * (y + tau * x);
          rq[k] = y + s * (x - tau * y);
        }
        rp[p] = app - t * apq;
        rq[q] = aqq + t * apq;
        rp[q] = 0.0;
        rq[p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          a[k * n + p] = rp[k];
          a[k * n + q] = rq[k];
        }

        if (w) {
          double* wp = w->data() + p * n;
          double* wq = w->data() + q * n;
          for (std::size_t k = 0; k < n; ++k) {
            const double x = wp[k];
            const double y = wq[k];
            wp[k] = x - s * (y + tau * x);
            wq[k] = y + s * (x - tau * y);
          }
        }
      }
    }
  }

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i * n + i];
  return values;
}

}  // namespace

DenseSymMatrix DenseSymMatrix::identity(std::size_t n) {
  DenseSymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1.0;
  return m;
}

DenseSymMatrix DenseSymMatrix::diagonal(std::span<const double> d) {
  DenseSymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.data_[i * d.size() + i] = d[i];
  return m;
}

DenseSymMatrix DenseSymMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> v;
  for (const auto& r : rows) v.emplace_back(r);
  return from_rows(v);
}

DenseSymMatrix DenseSymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  DenseSymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw ContractError("matrix rows must form a square array");
    for (std::size_t j = 0; j < n; ++j) m.data_[i * n + j] = rows[i][j];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = m.data_[i * n + j];
      const double b = m.data_[j * n + i];
      if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}))
        throw ContractError("matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      m.data_[j * n + i] = a;
    }
  return m;
}

DenseSymMatrix DenseSymMatrix::scaled(double c) const {
  DenseSymMatrix m = *this;
  for (double& v : m.data_) v *= c;
  return m;
}

double DenseSymMatrix::max_abs() const noexcept {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

double DenseSymMatrix::frobenius() const noexcept {
  double sum = 0.0;
  for (double v : data_) sum += v * v;
  return std::sqrt(sum);
}

std::vector<double> DenseSymMatrix::multiply(std::span<const double> x) const {
  if (x.size() != n_) throw ContractError("dimension mismatch in dense product");
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double sum = 0.0;
    const double* r = data_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j) sum += r[j] * x[j];
    y[i] = sum;
  }
  return y;
}

CholeskyFactor::CholeskyFactor(const DenseSymMatrix& m) : n_(m.order()), l_(m.order() * m.order(), 0.0) {
  for (std::size_t j = 0; j < n_; ++j) {
    double d = m(j, j);
    const double* lj = l_.data() + j * n_;
    for (std::size_t k = 0; k < j; ++k) d -= lj[k] * lj[k];
    if (!(d > 0.0))
      throw DefinitenessError("Cholesky factorization failed: nonpositive pivot " + std::to_string(j + 1));
    const double ljj = std::sqrt(d);
    l_[j * n_ + j] = ljj;
    for (std::size_t i = j + 1; i < n_; ++i) {
      const double* li = l_.data() + i * n_;
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      l_[i * n_ + j] = s / ljj;
    }
  }
}

void CholeskyFactor::forward_in_place(std::span<double> b) const {
  if (b.size() != n_) throw ContractError("dimension mismatch in triangular solve");
  for (std::size_t i = 0; i < n_; ++i) {
    const double* li = l_.data() + i * n_;
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= li[k] * b[k];
    b[i] = s / li[i];
  }
}

void CholeskyFactor::backward_in_place(std::span<double> y) const {
  if (y.size() != n_) throw ContractError("dimension mismatch in triangular solve");
  for (std::size_t ii = n_; ii-- > 0;) {
    y[ii] /= l_[ii * n_ + ii];
    const double xi = y[ii];
    const double* li = l_.data() + ii * n_;
    for (std::size_t k = 0; k < ii; ++k) y[k] -= li[k] * xi;
  }
}

void CholeskyFactor::solve_in_place(std::span<double> b) const {
  forward_in_place(b);
  backward_in_place(b);
}

std::vector<double> CholeskyFactor::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

std::vector<double> jacobi_eigenvalues(DenseSymMatrix m, std::vector<double>* vectors) {
  const std::size_t n = m.order();
  std::vector<double> a(m.data().begin(), m.data().end());
  std::vector<double> values = jacobi_in_place(a, n, vectors);
  sort_pairs(values, vectors, n);
  return values;
}

Spectrum gen_eig_small(const DenseSymMatrix& a, const DenseSymMatrix& b) {
  const std::size_t n = a.order();
  if (b.order() != n) throw ContractError("pencil matrices differ in order");
  if (n == 0 || n > 6) throw ContractError("gen_eig_small handles orders 1..6");
  const CholeskyFactor chol(b);
  std::vector<double> c = congruence(chol, a.data(), n);
  if (n == 1) return {{c[0]}};
  if (n == 2) {
    const double mean = 0.5 * (c[0] + c[3]);
    const double half = 0.5 * (c[0] - c[3]);
    const double rad = std::hypot(half, c[1]);
    return {{mean - rad, mean + rad}};
  }
  std::vector<double> values = jacobi_in_place(c, n, nullptr);
  std::sort(values.begin(), values.end());
  return {std::move(values)};
}

EigenDecomposition gen_eig_dense(const DenseSymMatrix& a, const DenseSymMatrix& b,
                                 const DenseEigOptions& options) {
  const std::size_t n = a.order();
  if (b.order() != n) throw ContractError("pencil matrices differ in order");
  EigenDecomposition out;
  if (n == 0) return out;

  DenseSymMatrix shifted_a = a;
  DenseSymMatrix shifted_b = b;
  std::size_t kernel_dim = 0;
  if (options.deflate_kernel) {
    const std::size_t comps = options.components;
    if (comps == 0 || n % comps != 0) throw ContractError("component count must divide the pencil order");
    const std::size_t block = n / comps;
    const double z = 1.0 / std::sqrt(static_cast<double>(block));
    const double tol_a = 1e-8 * std::max(a.max_abs(), 1e-300);
    const double tol_b = 1e-8 * std::max(b.max_abs(), 1e-300);
    for (std::size_t c = 0; c < comps; ++c) {
      std::vector<double> zc(n, 0.0);
      std::fill_n(zc.begin() + static_cast<std::ptrdiff_t>(c * block), block, z);
      const auto az = a.multiply(zc);
      const auto bz = b.multiply(zc);
      for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(az[i]) > tol_a || std::abs(bz[i]) > tol_b)
          throw KernelError("constant vector of component " + std::to_string(c) +
                            " is not a shared null vector of the pencil");
      }
      // Kernel direction becomes the isolated eigenvalue -1 of the shifted pencil.
      for (std::size_t i = c * block; i < (c + 1) * block; ++i)
        for (std::size_t j = c * block; j <= i; ++j) {
          shifted_a.add(i, j, -z * z);
          shifted_b.add(i, j, z * z);
        }
    }
    kernel_dim = comps;
  }

  const CholeskyFactor chol(shifted_b);
  std::vector<double> c = congruence(chol, shifted_a.data(), n);
  std::vector<double> w;
  std::vector<double> values = jacobi_in_place(c, n, options.want_vectors ? &w : nullptr);
  sort_pairs(values, options.want_vectors ? &w : nullptr, n);

  // Drop the kernel eigenvalues, which sit at -1 below the nonnegative rest.
  out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(kernel_dim), values.end());
  if (options.want_vectors) {
    out.vectors.reserve(n - kernel_dim);
    for (std::size_t i = kernel_dim; i < n; ++i) {
      std::vector<double> v(w.begin() + static_cast<std::ptrdiff_t>(i * n),
                            w.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
      chol.backward_in_place(v);
      out.vectors.push_back(std::move(v));
    }
  }
  return out;
}

Spectrum gen_eig_dense(const SymmetricSparseMatrix& a, const SymmetricSparseMatrix& b, bool deflate_kernel) {
  DenseEigOptions options;
  options.deflate_kernel = deflate_kernel;
  return {gen_eig_dense(a.to_dense(), b.to_dense(), options).values};
}

double max_relative_residual(const DenseSymMatrix& a, const DenseSymMatrix& b, const EigenDecomposition& eig) {
  const double na = inf_norm(a);
  const double nb = inf_norm(b);
  double worst = 0.0;
  for (std::size_t i = 0; i < eig.vectors.size(); ++i) {
    const auto& v = eig.vectors[i];
    const double lambda = eig.values[i];
    const auto av = a.multiply(v);
    const auto bv = b.multiply(v);
    double r2 = 0.0;
    double v2 = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double r = av[k] - lambda * bv[k];
      r2 += r * r;
      v2 += v[k] * v[k];
    }
    const double denom = (na + std::abs(lambda) * nb) * std::sqrt(v2);
    if (denom > 0.0) worst = std::max(worst, std::sqrt(r2) / denom);
  }
  return worst;
}

}  // namespace eigenbound
