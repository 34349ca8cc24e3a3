#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace geobs {

struct CgResult {
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Preconditioned conjugate gradients for a symmetric positive (semi-)definite
/// operator, starting from the contents of x. Stops when
/// ||r|| <= max(rel_tol ||b||, abs_tol). Reductions run in index order.
template <class Apply, class Precondition>
CgResult conjugate_gradient(Apply&& apply, Precondition&& precondition, std::span<const double> b,
                            std::span<double> x, double rel_tol, double abs_tol, int max_iters) {
  const std::size_t m = b.size();
  std::vector<double> r(m), z(m), p(m), q(m);
  apply(std::span<const double>(x), std::span<double>(q));
  for (std::size_t i = 0; i < m; ++i) r[i] = b[i] - q[i];
  const double target = std::max(rel_tol * std::sqrt(dot(b, b)), abs_tol);
  CgResult res;
  res.residual_norm = std::sqrt(dot(r, r));
  if (res.residual_norm <= target) {
    res.converged = true;
    return res;
  }
  precondition(std::span<const double>(r), std::span<double>(z));
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iters; ++it) {
    apply(std::span<const double>(p), std::span<double>(q));
    const double pq = dot(p, q);
    if (!(pq > 0.0)) break;
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < m; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    res.iterations = it;
    res.residual_norm = std::sqrt(dot(r, r));
    if (res.residual_norm <= target) {
      res.converged = true;
      return res;
    }
    precondition(std::span<const double>(r), std::span<double>(z));
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < m; ++i) p[i] = z[i] + beta * p[i];
  }
  return res;
}

}  // namespace geobs
