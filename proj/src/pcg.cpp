#include "eigenbound/pcg.hpp"

#include <cmath>

#include "eigenbound/errors.hpp"
#include "eigenbound/smalleig.hpp"

namespace eigenbound {

namespace {

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double energy_norm(const SymmetricSparseMatrix& a, const std::vector<double>& v) {
  return std::sqrt(std::max(0.0, dot(v, a * v)));
}

CholeskyFactor factor_or_throw(const SymmetricSparseMatrix& m, const char* which) {
  try {
    return CholeskyFactor(m.to_dense());
  } catch (const DefinitenessError& e) {
    throw DefinitenessError(std::string(which) + " is not positive definite: " + e.what());
  }
}

}  // namespace

PCGReport pcg_solve(const SymmetricSparseMatrix& a, const SymmetricSparseMatrix& atilde,
                    const std::vector<double>& b, double factor) {
  const std::size_t n = a.order();
  if (atilde.order() != n || b.size() != n) throw ContractError("pcg operands differ in size");
  if (!(factor > 0.0)) throw ParameterError("pcg reduction factor must be positive");

  PCGReport rep;
  rep.energy_error_history.push_back(1.0);
  if (n == 0) {
    rep.converged = true;
    return rep;
  }
  const CholeskyFactor la = factor_or_throw(a, "A");
  const CholeskyFactor lt = factor_or_throw(atilde, "preconditioner");
  const std::vector<double> exact = la.solve(b);
  const double ref = energy_norm(a, exact);
  if (ref == 0.0) {
    rep.converged = true;
    return rep;
  }

  std::vector<double> x(n, 0.0);
  std::vector<double> r = b;
  std::vector<double> z = lt.solve(r);
  std::vector<double> p = z;
  double rz = dot(r, z);
  std::vector<double> err(n);
  const std::size_t cap = 10 * n;
  for (std::size_t k = 1; k <= cap; ++k) {
    const std::vector<double> ap = a * p;
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    for (std::size_t i = 0; i < n; ++i) err[i] = exact[i] - x[i];
    const double rel = energy_norm(a, err) / ref;
    rep.energy_error_history.push_back(rel);
    rep.iterations = k;
    if (rel <= factor) {
      rep.converged = true;
      break;
    }
    z = lt.solve(r);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return rep;
}

}  // namespace eigenbound
