#pragma once

#include <vector>

#include "geobs/errors.hpp"
#include "geobs/maps.hpp"

namespace geobs {

/// Projected SOR settings for the scalar obstacle problem.
struct ObstacleSolveConfig {
  int max_iters = 20000;  ///< sweeps
  double tol = 1e-8;      ///< bound on max_complementarity
  double relaxation = 1.5;
  int check_interval = 5;  ///< sweeps between residual evaluations
  bool record_objective = false;

  /// Throws DomainError unless tol > 0, 0 < relaxation < 2 and the counts are positive.
  void validate() const;
};

/// Over-relaxation factor close to optimal for the Dirichlet Laplacian on the disk.
double suggested_relaxation(const DiskGrid& grid);

/// Discrete variational-inequality residuals of lambda against weight g.
/// With r_a = -Lap_h lambda_a + lambda_a g_a at interior node a:
///   max_negativity        = max (1 - lambda)_+
///   max_complementarity   = max |min(lambda_a - 1, r_a)|
///   max_interior_residual = max |r_a|
///   contact_fraction      = #{lambda_a <= 1 + contact_tol} / #interior
struct KKTReport {
  double max_negativity = 0.0;
  double max_complementarity = 0.0;
  double max_interior_residual = 0.0;
  double contact_fraction = 0.0;
  double contact_tol = 0.0;
};

/// Default contact tolerance 10 h^2.
double default_contact_tol(const DiskGrid& grid);

KKTReport kkt_report(const ScalarField& lambda, const ScalarField& g, double contact_tol);

class ObstacleNonConvergence : public NonConvergence {
 public:
  ObstacleNonConvergence(const std::string& what, KKTReport report, int sweeps)
      : NonConvergence(what), report_(report), sweeps_(sweeps) {}
  const KKTReport& report() const { return report_; }
  int sweeps() const { return sweeps_; }

 private:
  KKTReport report_;
  int sweeps_;
};

struct ObstacleSolution {
  ObstacleField lambda;
  KKTReport report;
  int sweeps = 0;
  /// Objective after each sweep (only with record_objective).
  std::vector<double> objective_trace;
};

/// Minimizes sum_edges (d lambda)^2 + h^2 sum_interior g lambda^2 subject to
/// lambda >= 1, with lambda fixed on boundary nodes to the values of `start`.
/// Interior values of `start` are the initial guess. Sweeps run in
/// lexicographic order; each node update minimizes the local quadratic,
/// over-relaxes and projects onto lambda >= 1, so the objective never
/// increases.
///
/// Throws DomainError for negative g, ObstacleNonConvergence when
/// max_complementarity stays above cfg.tol after cfg.max_iters sweeps.
ObstacleSolution solve_obstacle(const ScalarField& g, const ObstacleField& start,
                                const ObstacleSolveConfig& cfg);

/// Objective minimized by solve_obstacle().
double obstacle_objective(const ScalarField& lambda, const ScalarField& g);

/// min over interior nodes of Lap_h lambda.
double subharmonicity_margin(const ScalarField& lambda);

}  // namespace geobs
