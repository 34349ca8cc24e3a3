#pragma once

#include <vector>

#include "geobs/errors.hpp"
#include "geobs/fields.hpp"
#include "geobs/maps.hpp"
#include "geobs/sphere_map.hpp"

namespace geobs {

/// Field of special-orthogonal N x N matrices, 2 <= N <= 4, stored as N^2
/// channels in row-major order (channel r * N + c holds P_rc).
class RotationField : public VectorField {
 public:
  static constexpr int kMaxDim = 4;
  static constexpr double kOrthogonalityTol = 1e-10;

  /// Throws DomainError unless every active node satisfies
  /// max |P^T P - I| <= kOrthogonalityTol and det P > 0.
  RotationField(GridPtr grid, int dim, std::vector<double> values);

  /// Boundary-node rotations copied from `entries`, interior from the
  /// per-entry harmonic extension projected onto SO(N) by polar
  /// decomposition. Interior nodes whose extension is nearly singular
  /// (smallest singular value below 0.1) copy an assigned axis neighbour.
  static RotationField harmonic_initialization(const VectorField& entries, int dim);
  static RotationField identity(GridPtr grid, int dim);
  /// N = 2 rotation by theta(x, y).
  static RotationField from_angle(GridPtr grid, const std::function<double(double, double)>& theta);
  /// exp(A(x, y)) for the antisymmetric matrix whose upper-triangular
  /// entries (row-major) are written by `upper`.
  static RotationField from_generator(GridPtr grid, int dim,
                                      const std::function<void(double, double, std::span<double>)>& upper);

  int dim() const { return dim_; }
  double entry(std::size_t k, int r, int c) const { return value(k, r * dim_ + c); }
  /// Largest max |P^T P - I| over active nodes.
  double orthogonality_defect() const;

 private:
  int dim_;
};

/// Largest max-entry |P^T P - I| of a dense row-major matrix array.
double orthogonality_defect(int dim, std::span<const double> values, std::span<const std::size_t> nodes);

/// Projects M onto SO(N): the orthogonal polar factor, with the last
/// singular direction flipped when det M < 0. Returns the smallest singular value.
double project_to_rotation(int dim, std::span<const double> m, std::span<double> out);

/// exp(A) for a dim x dim matrix, row-major.
void matrix_exponential(int dim, std::span<const double> a, std::span<double> out);

using RotationSolveConfig = SphereSolveConfig;

class RotationNonConvergence : public NonConvergence {
 public:
  RotationNonConvergence(const std::string& what, std::vector<ResidualRecord> history)
      : NonConvergence(what), history_(std::move(history)) {}
  const std::vector<ResidualRecord>& history() const { return history_; }

 private:
  std::vector<ResidualRecord> history_;
};

struct RotationSolution {
  RotationField P;
  std::vector<ResidualRecord> history;
  int iterations = 0;
  int cg_iterations = 0;
  double residual = 0.0;
  /// Largest orthogonality defect over every iterate, including rejected trials.
  double max_orthogonality_drift = 0.0;
};

/// Local minimizer of sum_edges (lambda_a^2 + lambda_b^2)/2 |d P|^2 (Hilbert-Schmidt)
/// over SO(N)-valued P with P = boundary on boundary nodes. Tangent updates
/// are P A with A antisymmetric; the retraction is P exp(s A).
/// The residual is max |skew(P^T div_h(lambda^2 grad P))|.
///
/// Throws DomainError on dimension mismatch, RotationNonConvergence when
/// the residual stays above cfg.tol.
RotationSolution solve_rotation(const ObstacleField& lambda, const RotationField& boundary,
                                const RotationField& init, const RotationSolveConfig& cfg);
RotationSolution solve_rotation(const ObstacleField& lambda, const RotationField& boundary,
                                const RotationSolveConfig& cfg);

/// max |skew(P^T div_h(lambda^2 grad P))| over interior nodes.
double rotation_tangential_residual(const ScalarField& lambda, const RotationField& P);

/// Max over matrix entries (i, j) of the h^2-weighted L^2 norm of the
/// centered divergence of lambda^2 skew(P^T grad P)_ij. For N = 2 the (1,0)
/// entry of P^T grad P is exactly -Omega_01 of the first column of P.
/// Only nodes with |x| < radius count, as in el_residuals().
double rotation_conservation_residual(const ScalarField& lambda, const RotationField& P,
                                      double radius = 1.0);

/// Max node-wise Frobenius norm of sym(P^T grad P), both directions.
double rotation_symmetry_defect(const RotationField& P);

}  // namespace geobs
