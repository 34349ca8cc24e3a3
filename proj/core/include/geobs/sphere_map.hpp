#pragma once

#include <vector>

#include "geobs/errors.hpp"
#include "geobs/fields.hpp"
#include "geobs/maps.hpp"

namespace geobs {

struct SphereSolveConfig {
  int max_iters = 500;
  double tol = 1e-8;       ///< max-norm of the tangential residual
  double step = 1.0;       ///< initial fraction of the tangent update tried
  double backtracking = 0.5;
  double cg_rel_tol = 1e-5;
  int cg_max_iters = 20000;

  /// Throws DomainError unless tol > 0, step > 0, 0 < backtracking < 1.
  void validate() const;
};

struct ResidualRecord {
  int iter = 0;
  double energy = 0.0;
  double residual = 0.0;
};

class SphereNonConvergence : public NonConvergence {
 public:
  SphereNonConvergence(const std::string& what, std::vector<ResidualRecord> history)
      : NonConvergence(what), history_(std::move(history)) {}
  const std::vector<ResidualRecord>& history() const { return history_; }

 private:
  std::vector<ResidualRecord> history_;
};

struct SphereSolution {
  SphereField v;
  std::vector<ResidualRecord> history;  ///< one entry per accepted step, plus the start
  int iterations = 0;
  int cg_iterations = 0;
  double residual = 0.0;
};

/// Copies the boundary-node values of `boundary` into a sphere field whose
/// interior is the per-channel discrete harmonic extension, projected onto
/// the sphere. Nodes where the extension has norm below 0.1 take the value
/// of the first already-assigned axis neighbour, sweeping outward from the
/// boundary layer. Throws DomainError if a boundary value is not unit length.
SphereField harmonic_initialization(const VectorField& boundary);

/// Local minimizer of e_v(v) = sum_edges (lambda_a^2 + lambda_b^2)/2 |d v|^2
/// over sphere-valued v with v = boundary on boundary nodes, starting from
/// `init`. Each step minimizes the quadratic energy over tangent updates,
/// renormalizes node-wise and backtracks until e_v does not increase.
///
/// Throws DomainError for non-unit boundary values,
/// SphereNonConvergence when the tangential residual stays above cfg.tol.
SphereSolution solve_sphere(const ObstacleField& lambda, const VectorField& boundary,
                            const SphereField& init, const SphereSolveConfig& cfg);
SphereSolution solve_sphere(const ObstacleField& lambda, const VectorField& boundary,
                            const SphereSolveConfig& cfg);

/// max over interior nodes of |T_v div_h(lambda^2 grad v)|, the part of the
/// discrete Euler-Lagrange operator tangent to the sphere.
double tangential_residual(const ScalarField& lambda, const SphereField& v);

/// Omega_ij = v^j grad v^i - v^i grad v^j for i < j, one covector channel per
/// pair in lexicographic order (0,1), (0,2), ..., (N-2,N-1).
class AntisymPotential {
 public:
  explicit AntisymPotential(CovectorField pairs, int dim) : pairs_(std::move(pairs)), dim_(dim) {}
  int dim() const { return dim_; }
  const CovectorField& pairs() const { return pairs_; }
  static int pair_index(int i, int j, int dim);
  /// Omega_ij for any ordered pair; Omega_ji = -Omega_ij, Omega_ii = 0.
  std::array<double, 2> at(std::size_t k, int i, int j) const;

 private:
  CovectorField pairs_;
  int dim_;
};

AntisymPotential antisym_potential(const SphereField& v);

/// Euler-Lagrange residuals, h^2-weighted L^2 norms over the nodes with
/// |x| < radius where the centered stencils fit:
///   direct       div(lambda^2 grad v) + lambda^2 |grad v|^2 v
///   antisym      div(lambda^2 grad v^i) - sum_j Omega_ij . lambda^2 grad v^j
///   conservation max_{i<j} div(lambda^2 Omega_ij)
struct ElResiduals {
  double r_direct = 0.0;
  double r_antisym = 0.0;
  double r_conservation = 0.0;
};

///
/// The 2h-wide centered stencils see the node-to-node irregularity of the
/// boundary layer, which makes the full-disk norms grow like h^(-1/2) under
/// refinement; a radius below 1 measures the interior equations only.
ElResiduals el_residuals(const ScalarField& lambda, const SphereField& v, double radius = 1.0);

}  // namespace geobs
