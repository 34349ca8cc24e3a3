#include "scenarios.hpp"

#include <cmath>

#include "geobs/errors.hpp"

namespace geobs::cli {

ScenarioKind scenario_kind(const std::string& name) {
  if (name == "radial-obstacle") return ScenarioKind::obstacle;
  if (name == "so2-harmonic-angle" || name == "so3-random") return ScenarioKind::rotation;
  return ScenarioKind::critical;
}

double Uniform::operator()() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::function<double(double, double)> random_trig(Uniform& rng, int modes, double amplitude) {
  struct Mode {
    double c, a, b, d;
  };
  std::vector<Mode> m;
  for (int i = 0; i < modes; ++i) {
    m.push_back({rng.in(-amplitude, amplitude), rng.in(-3.0, 3.0), rng.in(-3.0, 3.0), rng.in(0.0, 6.283185307179586)});
  }
  return [m](double x, double y) {
    double s = 0.0;
    for (const Mode& q : m) s += q.c * std::sin(q.a * x + q.b * y + q.d);
    return s;
  };
}

std::function<double(double, double)> harmonic_angle(const RunConfig& c) {
  const double a = c.phi_slope, q = c.phi_curvature;
  return [a, q](double x, double y) { return a * x + q * (x * x - y * y); };
}

VectorField boundary_map(const RunConfig& c, GridPtr grid) {
  const double lb = c.lambda_b;
  if (c.scenario == "constant") {
    return VectorField::from_function(grid, c.dim, [lb](double, double, std::span<double> o) { o[0] = lb; });
  }
  if (c.scenario == "harmonic-angle") {
    // Evaluated at the node itself: phi is defined on the whole disk, and
    // this keeps the boundary data free of the O(h) projection error.
    const auto phi = harmonic_angle(c);
    return VectorField::from_function(grid, 2, [=](double x, double y, std::span<double> o) {
      o[0] = lb * std::cos(phi(x, y));
      o[1] = lb * std::sin(phi(x, y));
    });
  }
  if (c.scenario == "cap" || c.scenario == "partial-contact") {
    // Latitude circle; depends on the polar angle only, so node evaluation
    // equals evaluation at the radial projection.
    const double b = c.beta;
    return VectorField::from_function(grid, 3, [=](double x, double y, std::span<double> o) {
      const double t = std::atan2(y, x);
      o[0] = lb * std::sin(b) * std::cos(t);
      o[1] = lb * std::sin(b) * std::sin(t);
      o[2] = lb * std::cos(b);
    });
  }
  throw DomainError("scenario '" + c.scenario + "' has no boundary map");
}

RotationField boundary_rotation(const RunConfig& c, GridPtr grid) {
  if (c.scenario == "so2-harmonic-angle") return RotationField::from_angle(std::move(grid), harmonic_angle(c));
  if (c.scenario == "so3-random") {
    Uniform rng(c.seed);
    std::vector<std::function<double(double, double)>> gen;
    for (int p = 0; p < 3; ++p) gen.push_back(random_trig(rng, 3, 0.5));
    return RotationField::from_generator(std::move(grid), 3, [gen](double x, double y, std::span<double> u) {
      for (int p = 0; p < 3; ++p) u[p] = gen[p](x, y);
    });
  }
  throw DomainError("scenario '" + c.scenario + "' has no boundary rotation");
}

}  // namespace geobs::cli
