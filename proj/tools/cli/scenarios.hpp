#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "geobs/rotation.hpp"
#include "run_config.hpp"

namespace geobs::cli {

enum class ScenarioKind { critical, obstacle, rotation };

ScenarioKind scenario_kind(const std::string& name);

/// Platform-independent uniform doubles in [0, 1) (splitmix64 stream).
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : state_(seed) {}
  double operator()();
  double in(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

 private:
  std::uint64_t state_;
};

/// Smooth scalar function sum_m c_m sin(a_m x + b_m y + d_m) with
/// `modes` terms drawn from `rng`.
std::function<double(double, double)> random_trig(Uniform& rng, int modes, double amplitude);

/// phi = slope x + curvature (x^2 - y^2).
std::function<double(double, double)> harmonic_angle(const RunConfig& c);

/// Boundary map u_b for the critical-point scenarios (values on every
/// active node; only boundary nodes are used by the solver).
VectorField boundary_map(const RunConfig& c, GridPtr grid);

/// Boundary rotations for so2-harmonic-angle and so3-random.
RotationField boundary_rotation(const RunConfig& c, GridPtr grid);

}  // namespace geobs::cli
