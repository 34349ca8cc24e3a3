#include "geobs/disk_grid.hpp"

#include <string>

#include "geobs/errors.hpp"

namespace geobs {

const char* to_string(NodeClass c) {
  switch (c) {
    case NodeClass::exterior:
      return "exterior";
    case NodeClass::boundary:
      return "boundary";
    case NodeClass::interior:
      return "interior";
  }
  return "?";
}

std::shared_ptr<const DiskGrid> DiskGrid::build(int n) {
  if (n < kMinResolution) {
    throw InvalidResolution("grid resolution " + std::to_string(n) + " is below the minimum of " +
                            std::to_string(kMinResolution));
  }
  return std::shared_ptr<const DiskGrid>(new DiskGrid(n));
}

DiskGrid::DiskGrid(int n) : n_(n), h_(2.0 / (n - 1)), classes_(node_count(), NodeClass::exterior) {
  auto inside = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) return false;
    const double x = coord(i);
    const double y = coord(j);
    return x * x + y * y < 1.0;
  };
  for (int j = 0; j < n_; ++j) {
    for (int i = 0; i < n_; ++i) {
      if (!inside(i, j)) continue;
      const bool full = inside(i - 1, j) && inside(i + 1, j) && inside(i, j - 1) && inside(i, j + 1);
      classes_[index(i, j)] = full ? NodeClass::interior : NodeClass::boundary;
    }
  }
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    switch (classes_[k]) {
      case NodeClass::interior:
        interior_.push_back(k);
        active_.push_back(k);
        break;
      case NodeClass::boundary:
        boundary_.push_back(k);
        active_.push_back(k);
        break;
      case NodeClass::exterior:
        break;
    }
  }
}

void require_same_grid(const DiskGrid& a, const DiskGrid& b) {
  if (!a.same_as(b)) {
    throw GridMismatch("fields live on grids of resolution " + std::to_string(a.n()) + " and " +
                       std::to_string(b.n()));
  }
}

}  // namespace geobs
