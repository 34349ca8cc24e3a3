#include "geobs/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "geobs/field_io.hpp"
#include "geobs/linalg.hpp"

namespace geobs {

PoissonResult solve_poisson(const DiskGrid& grid, Stencil stencil,
                            const std::vector<std::uint8_t>& unknowns,
                            const std::vector<double>& f, const std::vector<double>& fixed,
                            double tol, int max_iters) {
  const std::size_t n = static_cast<std::size_t>(grid.n());
  const std::size_t reach = stencil == Stencil::wide ? 2 : 1;
  const double scale = stencil == Stencil::wide ? 1.0 / (4.0 * grid.h() * grid.h())
                                                : 1.0 / (grid.h() * grid.h());
  const std::size_t off[4] = {reach, reach * n, 0, 0};

  std::vector<std::size_t> nodes;
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    if (!unknowns[k]) continue;
    const int i = grid.col(k);
    const int j = grid.row(k);
    const int r = static_cast<int>(reach);
    if (i - r < 0 || j - r < 0 || i + r >= grid.n() || j + r >= grid.n() ||
        !grid.active(k + off[0]) || !grid.active(k - off[0]) || !grid.active(k + off[1]) ||
        !grid.active(k - off[1])) {
      throw DomainError("Poisson stencil leaves the disk at node " + std::to_string(k));
    }
    nodes.push_back(k);
  }

  // Move the known values to the right-hand side: -L0 u = -f + (L applied to fixed data).
  std::vector<double> b(grid.node_count(), 0.0);
  for (std::size_t k : nodes) {
    double known = 0.0;
    for (std::size_t nb : {k + off[0], k - off[0], k + off[1], k - off[1]}) {
      if (!unknowns[nb]) known += fixed[nb];
    }
    b[k] = -f[k] + scale * known;
  }
  auto apply = [&](std::span<const double> p, std::span<double> q) {
    for (std::size_t k : nodes) {
      double s = 4.0 * p[k];
      for (std::size_t nb : {k + off[0], k - off[0], k + off[1], k - off[1]}) {
        if (unknowns[nb]) s -= p[nb];
      }
      q[k] = scale * s;
    }
  };
  auto precondition = [&](std::span<const double> r, std::span<double> z) {
    for (std::size_t k : nodes) z[k] = r[k] / (4.0 * scale);
  };

  PoissonResult out;
  out.u.assign(grid.node_count(), 0.0);
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    if (!unknowns[k]) out.u[k] = fixed[k];
  }
  std::vector<double> x(grid.node_count(), 0.0);
  // CG stops on the Euclidean residual; check the max-norm afterwards and
  // tighten once if needed.
  double rel = 1e-13;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const CgResult cg = conjugate_gradient(apply, precondition, std::span<const double>(b),
                                           std::span<double>(x), rel, tol * 1e-2, max_iters);
    out.iterations += cg.iterations;
    double worst = 0.0;
    std::vector<double> q(grid.node_count(), 0.0);
    apply(std::span<const double>(x), std::span<double>(q));
    for (std::size_t k : nodes) worst = std::max(worst, std::abs(q[k] - b[k]));
    out.residual = worst;
    if (worst <= tol) break;
    rel *= 1e-2;
  }
  if (!(out.residual <= tol)) {
    throw PoissonNonConvergence("Poisson solve stalled at residual " + format_double(out.residual),
                                out.residual);
  }
  for (std::size_t k : nodes) out.u[k] = x[k];
  return out;
}

std::vector<double> harmonic_extension(const DiskGrid& grid, int width,
                                       const std::vector<double>& values) {
  std::vector<std::uint8_t> unknowns(grid.node_count(), 0);
  for (std::size_t k : grid.interior_nodes()) unknowns[k] = 1;
  std::vector<double> out(values);
  std::vector<double> zero(grid.node_count(), 0.0), fixed(grid.node_count(), 0.0);
  for (int c = 0; c < width; ++c) {
    for (std::size_t k = 0; k < grid.node_count(); ++k) fixed[k] = values[k * width + c];
    // Residual scale: data O(1), operator O(h^-2).
    const PoissonResult r = solve_poisson(grid, Stencil::five_point, unknowns, zero, fixed,
                                          1e-9 / (grid.h() * grid.h()) * 1e-3);
    for (std::size_t k : grid.interior_nodes()) out[k * width + c] = r.u[k];
  }
  return out;
}

}  // namespace geobs
