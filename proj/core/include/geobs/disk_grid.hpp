#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace geobs {

enum class NodeClass : std::uint8_t { exterior = 0, boundary = 1, interior = 2 };

const char* to_string(NodeClass c);

/// Uniform n x n lattice on [-1,1]^2 masked to the open unit disk.
///
/// Node (i, j) sits at x = -1 + i h, y = -1 + j h with h = 2 / (n - 1) and
/// has linear index j * n + i. A node is non-exterior iff x^2 + y^2 < 1.
/// Interior nodes are non-exterior nodes whose four axis neighbours are all
/// non-exterior; the remaining non-exterior nodes form the boundary layer,
/// where Dirichlet data is imposed.
class DiskGrid {
 public:
  static constexpr int kMinResolution = 8;

  /// Throws InvalidResolution for n < 8.
  static std::shared_ptr<const DiskGrid> build(int n);

  int n() const { return n_; }
  double h() const { return h_; }
  std::size_t node_count() const { return static_cast<std::size_t>(n_) * n_; }

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n_ + i; }
  int col(std::size_t k) const { return static_cast<int>(k % n_); }
  int row(std::size_t k) const { return static_cast<int>(k / n_); }

  double coord(int i) const { return -1.0 + i * h_; }
  double x(std::size_t k) const { return coord(col(k)); }
  double y(std::size_t k) const { return coord(row(k)); }

  NodeClass node_class(std::size_t k) const { return classes_[k]; }
  bool active(std::size_t k) const { return classes_[k] != NodeClass::exterior; }
  bool interior(std::size_t k) const { return classes_[k] == NodeClass::interior; }

  /// Linear indices in lexicographic (row-major) order.
  std::span<const std::size_t> interior_nodes() const { return interior_; }
  std::span<const std::size_t> boundary_nodes() const { return boundary_; }
  std::span<const std::size_t> active_nodes() const { return active_; }

  bool same_as(const DiskGrid& other) const { return n_ == other.n_; }

 private:
  explicit DiskGrid(int n);

  int n_;
  double h_;
  std::vector<NodeClass> classes_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> boundary_;
  std::vector<std::size_t> active_;
};

using GridPtr = std::shared_ptr<const DiskGrid>;

/// Throws GridMismatch unless both grids have the same resolution.
void require_same_grid(const DiskGrid& a, const DiskGrid& b);

}  // namespace geobs
