#pragma once

#include <vector>

#include "geobs/calculus.hpp"
#include "geobs/errors.hpp"
#include "geobs/maps.hpp"

namespace geobs {

struct Ball {
  Point center;
  double radius = 0.0;
};

// ---------------------------------------------------------------- Hodge split

/// F = grad a + perp_grad b + H on a ball, one (a, b) pair per channel of F.
///
/// a and b solve div grad a = div F and div grad b = curl F at every lattice
/// node of the ball, with a = b = 0 outside it. Using the composite centered
/// operator (5-point stencil on spacing 2h) makes div H and curl H vanish to
/// solver precision wherever they are defined inside the ball.
struct HodgeParts {
  VectorField a;
  VectorField b;
  CovectorField H;  ///< supported on the ball nodes where F, grad a and grad b are defined
  Ball ball;
  double reconstruction_error = 0.0;  ///< max |F - grad a - perp_grad b - H| on H's support
  double max_div_H = 0.0;             ///< over ball nodes where div H is defined
  double max_curl_H = 0.0;
  int poisson_iterations = 0;
};

/// Throws DomainError if the ball leaves the disk or a wide stencil from
/// one of its nodes reaches an exterior node; PoissonNonConvergence when a
/// potential cannot be solved to `tol`.
HodgeParts hodge_decompose(const CovectorField& F, Ball ball, double tol = 1e-10);

// ---------------------------------------------------------------- Decay fits

/// Least-squares fit of log ||F||_{L^p(B(center, r))} against log r.
struct DecayFit {
  Point center;
  std::vector<double> radii;
  double p = 2.0;
  std::vector<double> norms;
  double fitted_slope = 0.0;
  double r_squared = 0.0;
  /// Set when some norm is (numerically) zero; slope and r^2 are then 0.
  bool degenerate = false;
  /// p times the slope, the Morrey exponent estimate.
  double alpha_estimate() const { return p * fitted_slope; }
};

/// `count` radii spaced geometrically from r_min to r_max.
std::vector<double> geometric_radii(double r_min, double r_max, int count);

/// Throws DomainError for fewer than 5 radii, non-increasing radii, or a ball
/// leaving the disk.
DecayFit decay_fit(const NodeField& F, Point center, const std::vector<double>& radii, double p);

/// Decay of the harmonic part H over balls about the Hodge ball's centre.
DecayFit harmonic_decay_check(const CovectorField& H, const Ball& ball, double p,
                              const std::vector<double>& radii);

std::vector<DecayFit> morrey_fit(const NodeField& F, const std::vector<Point>& centers,
                                 const std::vector<double>& radii, double p);

// ---------------------------------------------------------------- Wente

struct WenteReport {
  double ratio = 0.0;
  double w_sup = 0.0;
  double grad_w_l2 = 0.0;
  double grad_a_l2 = 0.0;
  double grad_b_l2 = 0.0;
};

/// Solves the 5-point problem Lap w = grad a . perp_grad b on the ball nodes
/// with w = 0 outside, and returns
/// (||w||_inf + ||grad w||_2) / (||grad a||_2 ||grad b||_2), all norms over
/// the ball. `tol` bounds the Poisson residual relative to max |f|, f the
/// right-hand side. Throws DomainError when the denominator vanishes.
WenteReport wente_check(const ScalarField& a, const ScalarField& b, Ball ball, double tol = 1e-10);

// ---------------------------------------------------------------- Viscosity

struct ViscosityReport {
  double min_discrete_laplacian = 0.0;
  double max_discrete_laplacian = 0.0;
  double lambda_bound = 0.0;  ///< max lambda g with the edge-based weight g
  /// max over {lambda > 1 + contact_tol} of |Lap_h lambda - lambda |grad v|^2|
  /// with the centered |grad v|^2; 0 when that set is empty.
  double off_contact_eq_residual = 0.0;
  std::size_t off_contact_nodes = 0;
};

/// Laplacian extrema and Lambda over all interior nodes; the off-contact
/// residual only over interior nodes with |x| < radius, since centered
/// gradients next to the boundary layer do not converge.
ViscosityReport viscosity_report(const ScalarField& lambda, const VectorField& v, double contact_tol,
                                 double radius = 1.0);

// ---------------------------------------------------------------- Frehse

/// C-infinity bump: 1 for |x - c| <= r_in, 0 for |x - c| >= r_out.
ScalarField smooth_cutoff(GridPtr grid, Point center, double r_in, double r_out);

/// ||grad delta_{kh}(eta mu)||_{L^2} for each k in `steps`, with
/// delta_{kh} f(x) = (f(x + k h e_dir) - f(x)) / (k h), dir 0 = x, 1 = y.
/// Throws DomainError if a shift from a node where eta != 0 leaves the
/// active nodes, or for a non-positive step.
std::vector<double> difference_quotient_energy(const ScalarField& mu, const ScalarField& eta,
                                               const std::vector<int>& steps, int direction);

// ---------------------------------------------------------------- Hoelder

/// max |F(x) - F(y)| / |x - y|^alpha over a deterministic sample of node
/// pairs: base nodes taken with a fixed stride through the support, paired
/// with offsets of 1, 2, 4, ... lattice steps along (1,0), (0,1), (1,1), (1,-1).
/// The stride is the smallest one keeping the pair count within the budget.
double holder_seminorm(const NodeField& F, double alpha, std::size_t sample_budget);

// ---------------------------------------------------------------- Free boundary

struct Polyline {
  std::vector<Point> points;
  bool closed = false;
  double length() const;
  /// Shoelace area, meaningful for closed curves.
  double area() const;
  /// 4 pi A / P^2, 1 for a circle.
  double circularity() const;
};

/// Marching-squares level set {lambda = level} over lattice cells with four
/// active corners, linked into polylines (closed, or ending at the edge of
/// the active region). Deterministic order: curves start at the first cell
/// in lexicographic order.
std::vector<Polyline> level_set(const ScalarField& lambda, double level);

/// The level set at 1 + contact_tol.
std::vector<Polyline> free_boundary(const ScalarField& lambda, double contact_tol);

/// sqrt(area / pi) of the interior nodes with lambda <= 1 + threshold, each
/// node counting h^2.
double contact_radius(const ScalarField& lambda, double threshold);

}  // namespace geobs
