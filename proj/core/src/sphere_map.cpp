#include "geobs/sphere_map.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "geobs/field_io.hpp"
#include "geobs/calculus.hpp"
#include "geobs/energy.hpp"
#include "geobs/poisson.hpp"
#include "tangent_descent.hpp"

namespace geobs {
namespace {

constexpr double kUnitTol = 1e-10;

void check_unit_boundary(const VectorField& boundary) {
  for (std::size_t k : boundary.grid().boundary_nodes()) {
    if (std::abs(boundary.node_norm(k) - 1.0) > kUnitTol) {
      throw DomainError("boundary value at node " + std::to_string(k) + " is not unit length");
    }
  }
}

struct SphereProjector {
  int dim;
  void operator()(const double* base, double* vec) const {
    double d = 0.0;
    for (int c = 0; c < dim; ++c) d += base[c] * vec[c];
    for (int c = 0; c < dim; ++c) vec[c] -= d * base[c];
  }
};

struct SphereRetraction {
  int dim;
  void operator()(const double* base, const double* dir, double s, double* out) const {
    double norm = 0.0;
    for (int c = 0; c < dim; ++c) {
      out[c] = base[c] + s * dir[c];
      norm += out[c] * out[c];
    }
    norm = std::sqrt(norm);
    for (int c = 0; c < dim; ++c) out[c] /= norm;
  }
};

std::vector<double> squared(const ScalarField& lambda) {
  std::vector<double> w(lambda.values());
  for (double& x : w) x *= x;
  return w;
}

}  // namespace

void SphereSolveConfig::validate() const {
  if (!(tol > 0.0)) throw DomainError("sphere tolerance must be positive");
  if (!(step > 0.0)) throw DomainError("sphere step must be positive");
  if (!(backtracking > 0.0 && backtracking < 1.0)) {
    throw DomainError("backtracking factor must lie in (0, 1)");
  }
  if (max_iters < 0 || cg_max_iters < 1) throw DomainError("iteration counts must be positive");
}

SphereField harmonic_initialization(const VectorField& boundary) {
  check_unit_boundary(boundary);
  const DiskGrid& g = boundary.grid();
  const int dim = boundary.channels();
  std::vector<double> ext = harmonic_extension(g, dim, boundary.values());

  // Flag interior nodes whose extension is too short to project.
  std::vector<std::uint8_t> assigned(g.node_count(), 0);
  for (std::size_t k : g.boundary_nodes()) assigned[k] = 1;
  std::vector<std::size_t> degenerate;
  for (std::size_t k : g.interior_nodes()) {
    double s = 0.0;
    for (int c = 0; c < dim; ++c) s += ext[k * dim + c] * ext[k * dim + c];
    if (std::sqrt(s) < 0.1) {
      degenerate.push_back(k);
    } else {
      assigned[k] = 1;
    }
  }
  if (!degenerate.empty()) {
    // Breadth-first from assigned nodes; each degenerate node copies the
    // normalized value of its first assigned neighbour (E, W, N, S).
    const std::size_t n = static_cast<std::size_t>(g.n());
    std::vector<std::uint8_t> pending(g.node_count(), 0);
    for (std::size_t k : degenerate) pending[k] = 1;
    bool progress = true;
    while (progress) {
      progress = false;
      std::vector<std::pair<std::size_t, std::size_t>> layer;
      for (std::size_t k : degenerate) {
        if (!pending[k]) continue;
        for (std::size_t nb : {k + 1, k - 1, k + n, k - n}) {
          if (assigned[nb]) {
            layer.emplace_back(k, nb);
            break;
          }
        }
      }
      for (auto [k, nb] : layer) {
        double s = 0.0;
        for (int c = 0; c < dim; ++c) s += ext[nb * dim + c] * ext[nb * dim + c];
        s = std::sqrt(s);
        for (int c = 0; c < dim; ++c) ext[k * dim + c] = ext[nb * dim + c] / s;
        pending[k] = 0;
        assigned[k] = 1;
        progress = true;
      }
    }
  }
  return SphereField(boundary.grid_ptr(), dim, std::move(ext));
}

SphereSolution solve_sphere(const ObstacleField& lambda, const VectorField& boundary,
                            const SphereField& init, const SphereSolveConfig& cfg) {
  cfg.validate();
  require_same_grid(lambda.grid(), boundary.grid());
  require_same_grid(lambda.grid(), init.grid());
  if (boundary.channels() != init.dim()) throw DomainError("boundary and init dimensions differ");
  check_unit_boundary(boundary);
  const DiskGrid& g = lambda.grid();
  const int dim = init.dim();

  std::vector<double> x(init.values());
  for (std::size_t k : g.boundary_nodes()) {
    for (int c = 0; c < dim; ++c) x[k * dim + c] = boundary.value(k, c);
  }
  // Renormalize the copied boundary values exactly.
  SphereField start(lambda.grid_ptr(), dim, std::move(x));

  const std::vector<double> weight = squared(lambda);
  detail::DescentSettings s;
  s.max_iters = cfg.max_iters;
  s.tol = cfg.tol;
  s.step = cfg.step;
  s.backtrack = cfg.backtracking;
  s.cg_rel_tol = cfg.cg_rel_tol;
  s.cg_max_iters = cfg.cg_max_iters;
  detail::DescentResult r = detail::tangent_descent(g, weight, dim, start.values(),
                                                    SphereProjector{dim}, SphereRetraction{dim}, s);
  std::vector<ResidualRecord> history;
  history.reserve(r.history.size());
  for (const auto& h : r.history) history.push_back({h.iter, h.energy, h.residual});
  if (!r.converged) {
    throw SphereNonConvergence("sphere solve stopped at residual " + format_double(r.residual) +
                                   " after " + std::to_string(r.iterations) +
                                   " steps: " + r.failure,
                               std::move(history));
  }
  return SphereSolution{SphereField(lambda.grid_ptr(), dim, std::move(r.x)), std::move(history),
                        r.iterations, r.cg_iterations, r.residual};
}

SphereSolution solve_sphere(const ObstacleField& lambda, const VectorField& boundary,
                            const SphereSolveConfig& cfg) {
  return solve_sphere(lambda, boundary, harmonic_initialization(boundary), cfg);
}

double tangential_residual(const ScalarField& lambda, const SphereField& v) {
  require_same_grid(lambda.grid(), v.grid());
  const std::vector<double> weight = squared(lambda);
  detail::EdgeWeights ew(v.grid(), weight);
  std::vector<double> t;
  SphereProjector proj{v.dim()};
  return detail::tangential_forcing(v.grid(), ew, v.dim(), v.values(), proj, t);
}

int AntisymPotential::pair_index(int i, int j, int dim) {
  // Number of pairs (a, b), a < b, preceding (i, j) lexicographically.
  return i * dim - i * (i + 1) / 2 + (j - i - 1);
}

std::array<double, 2> AntisymPotential::at(std::size_t k, int i, int j) const {
  if (i == j) return {0.0, 0.0};
  if (i < j) return pairs_.at_channel(k, pair_index(i, j, dim_));
  const auto v = pairs_.at_channel(k, pair_index(j, i, dim_));
  return {-v[0], -v[1]};
}

AntisymPotential antisym_potential(const SphereField& v) {
  const int dim = v.dim();
  const CovectorField grad = gradient(v);
  const DiskGrid& g = v.grid();
  const int pairs = dim * (dim - 1) / 2;
  std::vector<double> out(g.node_count() * 2 * static_cast<std::size_t>(pairs), 0.0);
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (!grad.defined(k)) continue;
    for (int i = 0; i < dim; ++i) {
      for (int j = i + 1; j < dim; ++j) {
        const auto gi = grad.at_channel(k, i);
        const auto gj = grad.at_channel(k, j);
        const double vi = v.value(k, i);
        const double vj = v.value(k, j);
        double* dst = &out[k * 2 * pairs + 2 * AntisymPotential::pair_index(i, j, dim)];
        dst[0] = vj * gi[0] - vi * gj[0];
        dst[1] = vj * gi[1] - vi * gj[1];
      }
    }
  }
  return AntisymPotential(CovectorField(v.grid_ptr(), pairs, std::move(out), grad.support()), dim);
}

ElResiduals el_residuals(const ScalarField& lambda, const SphereField& v, double radius) {
  require_same_grid(lambda.grid(), v.grid());
  const DiskGrid& g = v.grid();
  const int dim = v.dim();
  const double h2 = g.h() * g.h();
  ScalarField lam2(lambda.grid_ptr(), squared(lambda), lambda.support());

  const CovectorField grad = gradient(v);
  const CovectorField flux = scale(grad, lam2);
  const VectorField div_flux = divergence(flux);
  const AntisymPotential omega = antisym_potential(v);
  const VectorField div_omega = divergence(scale(omega.pairs(), lam2));

  const double r2 = radius * radius;
  auto counted = [&](std::size_t k) { return g.x(k) * g.x(k) + g.y(k) * g.y(k) < r2; };

  ElResiduals out;
  double direct = 0.0;
  double anti = 0.0;
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (!div_flux.defined(k) || !counted(k)) continue;
    double grad_sq = 0.0;
    for (double c : grad.at(k)) grad_sq += c * c;
    for (int i = 0; i < dim; ++i) {
      const double d = div_flux.value(k, i) + lam2[k] * grad_sq * v.value(k, i);
      direct += d * d;
      double rhs = 0.0;
      for (int j = 0; j < dim; ++j) {
        const auto om = omega.at(k, i, j);
        const auto fj = flux.at_channel(k, j);
        rhs += om[0] * fj[0] + om[1] * fj[1];
      }
      const double a = div_flux.value(k, i) - rhs;
      anti += a * a;
    }
  }
  out.r_direct = std::sqrt(direct * h2);
  out.r_antisym = std::sqrt(anti * h2);
  for (int p = 0; p < div_omega.channels(); ++p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      if (div_omega.defined(k) && counted(k)) acc += div_omega.value(k, p) * div_omega.value(k, p);
    }
    out.r_conservation = std::max(out.r_conservation, std::sqrt(acc * h2));
  }
  return out;
}

}  // namespace geobs
