#pragma once

#include "geobs/maps.hpp"

namespace geobs {

// The discrete energies are edge sums over lattice edges joining two active
// nodes. Writing d_ab f = f_a - f_b,
//
//   D(u)      = sum_edges |d_ab u|^2
//   e_lambda  = sum_edges (d_ab lambda)^2
//   e_v       = sum_edges (lambda_a^2 + lambda_b^2) / 2 |d_ab v|^2
//
// Each is an h^2-weighted sum of squared one-sided difference quotients, and
// their gradients are exactly the 5-point operators used by the solvers:
// d e_lambda / d lambda_a = -2 h^2 (Laplacian lambda)_a and
// d e_v / d v_a = -2 h^2 div_h(lambda^2 grad v)_a.

/// Dirichlet energy of any multi-channel field (maps into R^N, matrix fields).
double dirichlet_energy(const VectorField& u);

struct SplitEnergy {
  double e_lambda = 0.0;
  double e_v = 0.0;
  double total() const { return e_lambda + e_v; }
};

/// E(lambda, v) split into its two parts. Works for any channel count, so
/// matrix-valued maps use the Hilbert-Schmidt norm.
SplitEnergy split_energy(const ScalarField& lambda, const VectorField& v);

/// g = |grad v|^2 on interior nodes: (1 / 2h^2) sum over the four neighbours
/// of |v_a - v_b|^2. With this weight e_v restricted to interior nodes equals
/// h^2 sum lambda^2 g.
ScalarField weight_field(const VectorField& v);
inline ScalarField weight_field(const ObstacleField&, const SphereField& v) { return weight_field(v); }

/// |grad v|^2 from the centered gradient (diagnostic counterpart of weight_field).
ScalarField centered_gradient_energy_density(const VectorField& v);

}  // namespace geobs
