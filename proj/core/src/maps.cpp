#include "geobs/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "geobs/field_io.hpp"
#include "geobs/errors.hpp"

namespace geobs {
namespace {

std::vector<double> normalized(const DiskGrid& grid, int dim, std::vector<double> values) {
  if (values.size() != grid.node_count() * static_cast<std::size_t>(dim)) {
    throw FormatError("sphere field storage does not match grid size");
  }
  for (std::size_t k : grid.active_nodes()) {
    double* p = values.data() + k * dim;
    double s = 0.0;
    for (int c = 0; c < dim; ++c) s += p[c] * p[c];
    const double norm = std::sqrt(s);
    if (!(norm > 1e-300) || !std::isfinite(norm)) {
      throw DomainError("cannot project node " + std::to_string(k) + " onto the sphere");
    }
    // Already unit to rounding: leave untouched so reconstruction is idempotent.
    if (std::abs(norm - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) continue;
    for (int c = 0; c < dim; ++c) p[c] /= norm;
  }
  return values;
}

}  // namespace

SphereField::SphereField(GridPtr grid, int dim, std::vector<double> values)
    : VectorField(grid, dim, normalized(*grid, dim, std::move(values))) {
  if (dim < 2) throw DomainError("sphere target dimension must be at least 2");
}

SphereField SphereField::constant(GridPtr grid, std::span<const double> direction) {
  const int dim = static_cast<int>(direction.size());
  std::vector<double> values(grid->node_count() * direction.size(), 0.0);
  for (std::size_t k : grid->active_nodes()) {
    std::copy(direction.begin(), direction.end(), values.begin() + k * dim);
  }
  return SphereField(std::move(grid), dim, std::move(values));
}

SphereField SphereField::from_function(
    GridPtr grid, int dim, const std::function<void(double, double, std::span<double>)>& f) {
  VectorField raw = VectorField::from_function(grid, dim, f);
  return SphereField(std::move(grid), dim, raw.values());
}

double SphereField::max_unit_defect() const {
  double worst = 0.0;
  for (std::size_t k : grid_->active_nodes()) worst = std::max(worst, std::abs(node_norm(k) - 1.0));
  return worst;
}

ObstacleField::ObstacleField(GridPtr grid, std::vector<double> values)
    : ScalarField(grid, std::move(values)) {
  for (std::size_t k : grid_->active_nodes()) {
    if (values_[k] < 1.0 - kSlack) {
      throw DomainError("lambda = " + format_double(values_[k]) + " < 1 at node " +
                        std::to_string(k));
    }
  }
}

ObstacleField ObstacleField::constant(GridPtr grid, double c) {
  return from_function(std::move(grid), [c](double, double) { return c; });
}

ObstacleField ObstacleField::from_function(GridPtr grid,
                                           const std::function<double(double, double)>& f) {
  ScalarField s = ScalarField::from_function(grid, f);
  return ObstacleField(std::move(grid), s.values());
}

ScalarField ObstacleField::excess() const {
  std::vector<double> mu(values_);
  for (std::size_t k : grid_->active_nodes()) mu[k] -= 1.0;
  return ScalarField(grid_, std::move(mu));
}

double MapField::min_modulus() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k : grid_->active_nodes()) m = std::min(m, node_norm(k));
  return m;
}

MapField assemble_u(const ObstacleField& lambda, const SphereField& v) {
  require_same_grid(lambda.grid(), v.grid());
  const int dim = v.dim();
  std::vector<double> u(v.values());
  for (std::size_t k : v.grid().active_nodes()) {
    for (int c = 0; c < dim; ++c) u[k * dim + c] *= lambda[k];
  }
  return MapField(v.grid_ptr(), dim, std::move(u));
}

std::pair<ObstacleField, SphereField> split_u(const MapField& u) {
  const DiskGrid& g = u.grid();
  std::vector<double> lam(g.node_count(), 0.0);
  for (std::size_t k : g.active_nodes()) lam[k] = u.node_norm(k);
  ObstacleField lambda(u.grid_ptr(), std::move(lam));
  SphereField v(u.grid_ptr(), u.dim(), u.values());
  return {std::move(lambda), std::move(v)};
}

}  // namespace geobs
