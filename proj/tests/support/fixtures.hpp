#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "geobs/calculus.hpp"
#include "geobs/maps.hpp"

// Small helpers shared by the unit tests.
namespace fixture {

/// Observed convergence order from errors at successive halvings of h.
inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

/// Max |a - b| over the entries of two dense arrays.
inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Smooth unit-sphere map (sin a cos b, sin a sin b, cos a) with angles
/// depending smoothly on position; not a critical point of anything.
inline geobs::SphereField wavy_sphere_map(geobs::GridPtr grid, double amplitude = 1.0) {
  return geobs::SphereField::from_function(grid, 3, [amplitude](double x, double y, std::span<double> o) {
    const double a = 0.6 + amplitude * 0.5 * std::sin(2.0 * x + y);
    const double b = amplitude * (1.3 * x - 0.7 * y * y + 0.4 * std::cos(3.0 * y));
    o[0] = std::sin(a) * std::cos(b);
    o[1] = std::sin(a) * std::sin(b);
    o[2] = std::cos(a);
  });
}

/// Fixed rotation of R^3 used for equivariance checks.
inline std::vector<double> fixed_rotation3() {
  const double c1 = std::cos(0.7), s1 = std::sin(0.7), c2 = std::cos(-1.1), s2 = std::sin(-1.1);
  // Rz(0.7) * Rx(-1.1), row-major.
  return {c1, -s1 * c2, s1 * s2, s1, c1 * c2, -c1 * s2, 0.0, s2, c2};
}

/// Applies the row-major matrix q node-wise to a width-dim dense array.
inline std::vector<double> rotate_values(const std::vector<double>& q, int dim, const std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t k = 0; k < v.size() / dim; ++k) {
    for (int r = 0; r < dim; ++r) {
      double s = 0.0;
      for (int c = 0; c < dim; ++c) s += q[r * dim + c] * v[k * dim + c];
      out[k * dim + r] = s;
    }
  }
  return out;
}

}  // namespace fixture
