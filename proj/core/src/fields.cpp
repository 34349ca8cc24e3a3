#include "geobs/fields.hpp"

#include <cmath>
#include <string>

#include "geobs/errors.hpp"

namespace geobs {

std::vector<std::uint8_t> active_support(const DiskGrid& grid) {
  std::vector<std::uint8_t> mask(grid.node_count(), 0);
  for (std::size_t k : grid.active_nodes()) mask[k] = 1;
  return mask;
}

NodeField::NodeField(GridPtr grid, int width)
    : grid_(std::move(grid)),
      width_(width),
      values_(grid_->node_count() * static_cast<std::size_t>(width), 0.0),
      support_(active_support(*grid_)) {
  if (width < 1) throw DomainError("field width must be positive");
}

NodeField::NodeField(GridPtr grid, int width, std::vector<double> values,
                     std::vector<std::uint8_t> support)
    : grid_(std::move(grid)), width_(width), values_(std::move(values)), support_(std::move(support)) {
  if (width < 1) throw DomainError("field width must be positive");
  if (values_.size() != grid_->node_count() * static_cast<std::size_t>(width) ||
      support_.size() != grid_->node_count()) {
    throw FormatError("field storage does not match grid size");
  }
  for (std::size_t k = 0; k < support_.size(); ++k) {
    for (int c = 0; c < width_; ++c) {
      double& v = values_[k * static_cast<std::size_t>(width_) + c];
      if (!support_[k]) {
        v = 0.0;
      } else if (!std::isfinite(v)) {
        throw DomainError("non-finite field value at node " + std::to_string(k));
      }
    }
  }
}

std::size_t NodeField::support_size() const {
  std::size_t count = 0;
  for (auto s : support_) count += s;
  return count;
}

double NodeField::node_norm(std::size_t k) const {
  double s = 0.0;
  for (double v : at(k)) s += v * v;
  return std::sqrt(s);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : ScalarField(grid, std::move(values), active_support(*grid)) {}

ScalarField ScalarField::from_function(GridPtr grid, const std::function<double(double, double)>& f) {
  std::vector<double> values(grid->node_count(), 0.0);
  for (std::size_t k : grid->active_nodes()) values[k] = f(grid->x(k), grid->y(k));
  return ScalarField(grid, std::move(values));
}

ScalarField ScalarField::constant(GridPtr grid, double c) {
  return from_function(std::move(grid), [c](double, double) { return c; });
}

VectorField::VectorField(GridPtr grid, int channels, std::vector<double> values)
    : VectorField(grid, channels, std::move(values), active_support(*grid)) {}

VectorField VectorField::from_function(
    GridPtr grid, int channels, const std::function<void(double, double, std::span<double>)>& f) {
  std::vector<double> values(grid->node_count() * static_cast<std::size_t>(channels), 0.0);
  for (std::size_t k : grid->active_nodes()) {
    f(grid->x(k), grid->y(k),
      std::span<double>(values.data() + k * static_cast<std::size_t>(channels),
                        static_cast<std::size_t>(channels)));
  }
  return VectorField(grid, channels, std::move(values));
}

ScalarField VectorField::channel(int c) const {
  std::vector<double> values(grid_->node_count(), 0.0);
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = value(k, c);
  return ScalarField(grid_, std::move(values), support_);
}

CovectorField CovectorField::from_function(
    GridPtr grid, int channels, const std::function<void(double, double, std::span<double>)>& f) {
  const std::size_t w = 2 * static_cast<std::size_t>(channels);
  std::vector<double> values(grid->node_count() * w, 0.0);
  for (std::size_t k : grid->active_nodes()) {
    f(grid->x(k), grid->y(k), std::span<double>(values.data() + k * w, w));
  }
  auto support = active_support(*grid);
  return CovectorField(std::move(grid), channels, std::move(values), std::move(support));
}

CovectorField CovectorField::channel(int c) const {
  std::vector<double> values(grid_->node_count() * 2, 0.0);
  for (std::size_t k = 0; k < grid_->node_count(); ++k) {
    const auto v = at_channel(k, c);
    values[2 * k] = v[0];
    values[2 * k + 1] = v[1];
  }
  return CovectorField(grid_, 1, std::move(values), support_);
}

}  // namespace geobs
