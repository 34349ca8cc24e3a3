#pragma once

#include "geobs/fields.hpp"

namespace geobs {

/// Map v into the unit sphere S^{N-1} of R^N.
///
/// Every constructor projects the active-node values radially onto the
/// sphere, so | |v| - 1 | <= 1e-12 holds for every instance. Values already
/// unit to within 4 ulps are kept as given, which makes serialization lossless. A node vector
/// too short to project (norm below 1e-300) raises DomainError.
class SphereField : public VectorField {
 public:
  SphereField(GridPtr grid, int dim, std::vector<double> values);

  static SphereField constant(GridPtr grid, std::span<const double> direction);
  static SphereField from_function(GridPtr grid, int dim,
                                   const std::function<void(double, double, std::span<double>)>& f);

  int dim() const { return width_; }
  /// Largest | |v| - 1 | over active nodes.
  double max_unit_defect() const;
};

/// Distance-to-origin component lambda >= 1.
class ObstacleField : public ScalarField {
 public:
  static constexpr double kSlack = 1e-12;

  /// Throws DomainError if some active value is below 1 - kSlack.
  ObstacleField(GridPtr grid, std::vector<double> values);
  explicit ObstacleField(const ScalarField& f) : ObstacleField(f.grid_ptr(), f.values()) {}

  static ObstacleField constant(GridPtr grid, double c);
  static ObstacleField from_function(GridPtr grid, const std::function<double(double, double)>& f);

  /// mu = lambda - 1.
  ScalarField excess() const;
};

/// u = lambda v with values in R^N.
class MapField : public VectorField {
 public:
  MapField(GridPtr grid, int dim, std::vector<double> values)
      : VectorField(std::move(grid), dim, std::move(values)) {}
  int dim() const { return width_; }
  /// Smallest |u| over active nodes.
  double min_modulus() const;
};

/// u = lambda v node-wise. Throws GridMismatch for fields on different grids.
MapField assemble_u(const ObstacleField& lambda, const SphereField& v);

/// Inverse splitting lambda = |u|, v = u / |u|. Throws DomainError if |u| < 1 - 1e-12 somewhere.
std::pair<ObstacleField, SphereField> split_u(const MapField& u);

}  // namespace geobs
