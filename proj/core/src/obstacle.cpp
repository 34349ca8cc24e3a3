#include "geobs/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "geobs/field_io.hpp"
#include "geobs/calculus.hpp"

namespace geobs {

void ObstacleSolveConfig::validate() const {
  if (!(tol > 0.0)) throw DomainError("obstacle tolerance must be positive");
  if (!(relaxation > 0.0 && relaxation < 2.0)) {
    throw DomainError("relaxation factor must lie in (0, 2)");
  }
  if (max_iters < 1 || check_interval < 1) throw DomainError("iteration counts must be positive");
}

double suggested_relaxation(const DiskGrid& grid) {
  // Jacobi spectral radius 1 - h^2 j0^2 / 4 with j0 the first zero of J_0.
  constexpr double j0 = 2.404825557695773;
  const double rho = 1.0 - grid.h() * grid.h() * j0 * j0 / 4.0;
  return 2.0 / (1.0 + std::sqrt(1.0 - rho * rho));
}

double default_contact_tol(const DiskGrid& grid) { return 10.0 * grid.h() * grid.h(); }

KKTReport kkt_report(const ScalarField& lambda, const ScalarField& g, double contact_tol) {
  require_same_grid(lambda.grid(), g.grid());
  const DiskGrid& grid = lambda.grid();
  const ScalarField lap = laplacian(lambda);
  KKTReport rep;
  rep.contact_tol = contact_tol;
  std::size_t contact = 0;
  std::size_t counted = 0;
  for (std::size_t k : grid.active_nodes()) {
    rep.max_negativity = std::max(rep.max_negativity, 1.0 - lambda[k]);
  }
  for (std::size_t k : grid.interior_nodes()) {
    if (!lap.defined(k)) continue;
    ++counted;
    const double r = -lap[k] + lambda[k] * g[k];
    rep.max_interior_residual = std::max(rep.max_interior_residual, std::abs(r));
    rep.max_complementarity = std::max(rep.max_complementarity, std::abs(std::min(lambda[k] - 1.0, r)));
    if (lambda[k] <= 1.0 + contact_tol) ++contact;
  }
  rep.contact_fraction = counted ? static_cast<double>(contact) / counted : 0.0;
  return rep;
}

double obstacle_objective(const ScalarField& lambda, const ScalarField& g) {
  const DiskGrid& grid = lambda.grid();
  const std::size_t n = static_cast<std::size_t>(grid.n());
  const double h2 = grid.h() * grid.h();
  double j = 0.0;
  for (std::size_t a : grid.active_nodes()) {
    if (grid.active(a + 1)) j += (lambda[a] - lambda[a + 1]) * (lambda[a] - lambda[a + 1]);
    if (grid.active(a + n)) j += (lambda[a] - lambda[a + n]) * (lambda[a] - lambda[a + n]);
  }
  for (std::size_t a : grid.interior_nodes()) j += h2 * g[a] * lambda[a] * lambda[a];
  return j;
}

ObstacleSolution solve_obstacle(const ScalarField& g, const ObstacleField& start,
                                const ObstacleSolveConfig& cfg) {
  cfg.validate();
  require_same_grid(g.grid(), start.grid());
  const DiskGrid& grid = start.grid();
  for (std::size_t k : grid.interior_nodes()) {
    if (!g.defined(k)) throw DomainError("weight g must be defined on every interior node");
    if (g[k] < 0.0) throw DomainError("weight g is negative at node " + std::to_string(k));
  }
  const std::size_t n = static_cast<std::size_t>(grid.n());
  const double h2 = grid.h() * grid.h();
  const double omega = cfg.relaxation;

  std::vector<double> lam(start.values());
  for (std::size_t k : grid.interior_nodes()) lam[k] = std::max(lam[k], 1.0);
  std::vector<double> diag(grid.node_count(), 0.0);
  for (std::size_t k : grid.interior_nodes()) diag[k] = 4.0 + h2 * g[k];

  ObstacleSolution sol{start, {}, 0, {}};
  const double ctol = default_contact_tol(grid);
  auto snapshot = [&] { return ObstacleField(start.grid_ptr(), lam); };

  for (int sweep = 1; sweep <= cfg.max_iters; ++sweep) {
    for (std::size_t k : grid.interior_nodes()) {
      const double target = (lam[k - 1] + lam[k + 1] + lam[k - n] + lam[k + n]) / diag[k];
      lam[k] = std::max(1.0, lam[k] + omega * (target - lam[k]));
    }
    if (cfg.record_objective) {
      sol.objective_trace.push_back(obstacle_objective(ScalarField(start.grid_ptr(), lam), g));
    }
    if (sweep % cfg.check_interval == 0 || sweep == cfg.max_iters) {
      ObstacleField current = snapshot();
      KKTReport rep = kkt_report(current, g, ctol);
      if (rep.max_complementarity <= cfg.tol) {
        sol.lambda = std::move(current);
        sol.report = rep;
        sol.sweeps = sweep;
        return sol;
      }
      if (sweep == cfg.max_iters) {
        throw ObstacleNonConvergence("projected SOR did not reach complementarity " +
                                         format_double(cfg.tol) + " in " +
                                         std::to_string(cfg.max_iters) + " sweeps (residual " +
                                         format_double(rep.max_complementarity) + ")",
                                     rep, sweep);
      }
    }
  }
  return sol;  // unreachable
}

double subharmonicity_margin(const ScalarField& lambda) {
  const ScalarField lap = laplacian(lambda);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k : lambda.grid().interior_nodes()) {
    if (lap.defined(k)) m = std::min(m, lap[k]);
  }
  return m;
}

}  // namespace geobs
