#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "geobs/disk_grid.hpp"

namespace geobs {

/// Per-node storage of `width` reals on a declared support mask.
///
/// Values are stored densely over all n^2 lattice nodes; entries outside the
/// support are zero. Fields are immutable once constructed and every
/// constructor rejects non-finite values.
class NodeField {
 public:
  /// Zero field with support equal to the active (non-exterior) nodes.
  NodeField(GridPtr grid, int width);
  NodeField(GridPtr grid, int width, std::vector<double> values, std::vector<std::uint8_t> support);

  const DiskGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int width() const { return width_; }

  bool defined(std::size_t k) const { return support_[k] != 0; }
  const std::vector<std::uint8_t>& support() const { return support_; }
  std::size_t support_size() const;

  std::span<const double> at(std::size_t k) const {
    return {values_.data() + k * static_cast<std::size_t>(width_), static_cast<std::size_t>(width_)};
  }
  double value(std::size_t k, int c) const { return values_[k * static_cast<std::size_t>(width_) + c]; }
  const std::vector<double>& values() const { return values_; }

  /// Euclidean norm of the per-node values.
  double node_norm(std::size_t k) const;

 protected:
  GridPtr grid_;
  int width_;
  std::vector<double> values_;
  std::vector<std::uint8_t> support_;
};

/// Support mask equal to the active nodes of `grid`.
std::vector<std::uint8_t> active_support(const DiskGrid& grid);

class ScalarField : public NodeField {
 public:
  explicit ScalarField(GridPtr grid) : NodeField(std::move(grid), 1) {}
  ScalarField(GridPtr grid, std::vector<double> values, std::vector<std::uint8_t> support)
      : NodeField(std::move(grid), 1, std::move(values), std::move(support)) {}
  /// Values on the active nodes, support = active nodes.
  ScalarField(GridPtr grid, std::vector<double> values);

  static ScalarField from_function(GridPtr grid, const std::function<double(double, double)>& f);
  static ScalarField constant(GridPtr grid, double c);

  double operator[](std::size_t k) const { return values_[k]; }
};

/// Several scalar channels per node (the components of a map into R^N,
/// the N^2 entries of a matrix field, per-channel Hodge potentials, ...).
class VectorField : public NodeField {
 public:
  VectorField(GridPtr grid, int channels) : NodeField(std::move(grid), channels) {}
  VectorField(GridPtr grid, int channels, std::vector<double> values,
              std::vector<std::uint8_t> support)
      : NodeField(std::move(grid), channels, std::move(values), std::move(support)) {}
  /// Values on the active nodes, support = active nodes.
  VectorField(GridPtr grid, int channels, std::vector<double> values);

  static VectorField from_function(GridPtr grid, int channels,
                                   const std::function<void(double, double, std::span<double>)>& f);

  int channels() const { return width_; }
  ScalarField channel(int c) const;
};

/// One 2-vector per channel per node. Component d of channel c at node k
/// lives at values[k * 2C + 2c + d].
class CovectorField : public NodeField {
 public:
  CovectorField(GridPtr grid, int channels) : NodeField(std::move(grid), 2 * channels) {}
  CovectorField(GridPtr grid, int channels, std::vector<double> values,
                std::vector<std::uint8_t> support)
      : NodeField(std::move(grid), 2 * channels, std::move(values), std::move(support)) {}

  static CovectorField from_function(
      GridPtr grid, int channels,
      const std::function<void(double, double, std::span<double>)>& f);

  int channels() const { return width_ / 2; }
  std::array<double, 2> at_channel(std::size_t k, int c) const {
    const std::size_t base = k * static_cast<std::size_t>(width_) + 2 * static_cast<std::size_t>(c);
    return {values_[base], values_[base + 1]};
  }
  CovectorField channel(int c) const;
};

}  // namespace geobs
