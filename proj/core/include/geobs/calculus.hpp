#pragma once

#include <limits>

#include "geobs/fields.hpp"

namespace geobs {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Centered differences, one channel per input channel. Defined at active
/// nodes whose four axis neighbours all lie in the support of `f`; exact on
/// quadratics there.
CovectorField gradient(const NodeField& f);

/// Rotated gradient (-d/dy, d/dx), same support as gradient().
CovectorField perp_gradient(const NodeField& f);

/// Negative h^2-adjoint of gradient(): centered differences of the
/// zero-extended field, defined where all four neighbours are in the
/// support of F.
VectorField divergence(const CovectorField& F);
ScalarField scalar_divergence(const CovectorField& F);

/// d/dx F_2 - d/dy F_1 with the same stencil and support as divergence().
VectorField curl(const CovectorField& F);

/// Standard 5-point Laplacian on the support where all four neighbours of a
/// node carry values.
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& f);

/// Conservative 5-point approximation of div(w grad f): edge weights are
/// the arithmetic mean of the node weights. With w == 1 this is laplacian().
VectorField weighted_laplacian(const ScalarField& w, const VectorField& f);

/// Node-wise product of a covector field with a scalar weight.
CovectorField scale(const CovectorField& F, const ScalarField& w);

/// Discrete L^p norm over the nodes of the support with |x - c| < r:
/// (sum |F|^p h^2)^(1/p), or max |F| for p = kInfNorm, with |F| the
/// Euclidean norm of all per-node values.
/// Throws DomainError unless the ball lies inside the unit disk and p >= 1.
double ball_norm(const NodeField& F, Point center, double r, double p);

/// Nodes with |x - c| < r, lexicographic order.
std::vector<std::size_t> ball_nodes(const DiskGrid& grid, Point center, double r);

/// h^2-weighted L^2 norm over the support (all channels).
double l2_norm(const NodeField& f);
/// Max node-wise Euclidean norm over the support.
double max_norm(const NodeField& f);

}  // namespace geobs
