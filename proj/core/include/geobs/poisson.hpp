#pragma once

#include <cstdint>
#include <vector>

#include "geobs/disk_grid.hpp"
#include "geobs/errors.hpp"

namespace geobs {

/// five_point: the standard 5-point Laplacian.
/// wide: divergence(gradient(.)) built from centered differences, i.e. the
/// 5-point stencil on spacing 2h.
enum class Stencil { five_point, wide };

class PoissonNonConvergence : public NonConvergence {
 public:
  PoissonNonConvergence(const std::string& what, double residual)
      : NonConvergence(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct PoissonResult {
  std::vector<double> u;  ///< dense over the lattice
  int iterations = 0;
  double residual = 0.0;  ///< max |L u - f| over the unknowns
};

/// Solves L u = f at nodes flagged in `unknowns`, with u taken from `fixed`
/// elsewhere (dense arrays over the lattice). Every node reached by the
/// stencil from an unknown must be active (DomainError otherwise).
/// CG on -L to a max-norm residual of `tol`; PoissonNonConvergence on failure.
PoissonResult solve_poisson(const DiskGrid& grid, Stencil stencil,
                            const std::vector<std::uint8_t>& unknowns,
                            const std::vector<double>& f, const std::vector<double>& fixed,
                            double tol = 1e-10, int max_iters = 100000);

/// Per-channel discrete harmonic extension of the boundary-node values of a
/// dense width-W array into the interior nodes.
std::vector<double> harmonic_extension(const DiskGrid& grid, int width, const std::vector<double>& values);

}  // namespace geobs
