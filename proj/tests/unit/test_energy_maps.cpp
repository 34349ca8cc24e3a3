#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "geobs/energy.hpp"
#include "geobs/errors.hpp"

using namespace geobs;

namespace {

ObstacleField bumpy_lambda(GridPtr g) {
  return ObstacleField::from_function(g, [](double x, double y) { return 1.2 + 0.3 * x * x + 0.2 * std::sin(2 * y); });
}

}  // namespace

TEST_CASE("assemble_u: constant pairs") {
  const GridPtr g = DiskGrid::build(16);
  const double e1[] = {1.0, 0.0, 0.0}, e2[] = {0.0, 1.0};
  const MapField u1 = assemble_u(ObstacleField::constant(g, 1.0), SphereField::constant(g, e1));
  const MapField u2 = assemble_u(ObstacleField::constant(g, 2.0), SphereField::constant(g, e2));
  for (std::size_t k : g->active_nodes()) {
    CHECK(u1.value(k, 0) == 1.0);
    CHECK(u1.value(k, 1) == 0.0);
    CHECK(u2.value(k, 0) == 0.0);
    CHECK(u2.value(k, 1) == 2.0);
  }
}

TEST_CASE("assemble_u: modulus equals lambda node-wise for random valid pairs") {
  const GridPtr g = DiskGrid::build(30);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const ObstacleField lam = ObstacleField::from_function(g, [&](double, double) { return 1.0 + 3.0 * (u(rng) + 1.0); });
  const SphereField v = SphereField::from_function(g, 4, [&](double, double, std::span<double> o) {
    for (double& c : o) c = u(rng);
    o[0] += 2.0;
  });
  const MapField m = assemble_u(lam, v);
  for (std::size_t k : g->active_nodes()) CHECK(std::abs(m.node_norm(k) - lam[k]) <= 1e-12);
  const auto [lam2, v2] = split_u(m);
  CHECK(fixture::max_diff(lam2.values(), lam.values()) <= 1e-12);
  CHECK(fixture::max_diff(v2.values(), v.values()) <= 1e-12);
}

TEST_CASE("fields: invalid values are rejected") {
  const GridPtr g = DiskGrid::build(16);
  CHECK_THROWS_AS(ObstacleField::constant(g, 0.9), DomainError);
  const double zero[] = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(SphereField::constant(g, zero), DomainError);
  CHECK_THROWS_AS(assemble_u(ObstacleField::constant(g, 1.0), SphereField::constant(DiskGrid::build(17), std::array{1.0, 0.0})),
                  GridMismatch);
  const MapField small(g, 2, std::vector<double>(g->node_count() * 2, 0.5));
  CHECK_THROWS_AS(split_u(small), DomainError);
}

TEST_CASE("dirichlet_energy: constants vanish, the identity map approaches 2 pi") {
  for (int n : {32, 64, 128}) {
    const GridPtr g = DiskGrid::build(n);
    const VectorField c = VectorField::from_function(g, 2, [](double, double, std::span<double> o) { o[0] = 3.0; });
    CHECK(dirichlet_energy(c) == 0.0);
    const VectorField id = VectorField::from_function(g, 3, [](double x, double y, std::span<double> o) {
      o[0] = x;
      o[1] = y;
    });
    CHECK(std::abs(dirichlet_energy(id) - 2 * std::numbers::pi) <= 8 * g->h());
  }
}

TEST_CASE("split_energy: constant v, unit weight and scaling") {
  const GridPtr g = DiskGrid::build(40);
  const SphereField v = fixture::wavy_sphere_map(g);
  const double e1[] = {0.0, 0.0, 1.0};
  CHECK(split_energy(bumpy_lambda(g), SphereField::constant(g, e1)).e_v == 0.0);
  const double d = dirichlet_energy(v);
  CHECK(split_energy(ObstacleField::constant(g, 1.0), v).e_v == doctest::Approx(d).epsilon(1e-13));
  CHECK(std::abs(split_energy(ObstacleField::constant(g, 2.0), v).e_v - 4 * d) <= 1e-12 * d);
  CHECK(split_energy(ObstacleField::constant(g, 2.0), v).e_lambda == 0.0);
}

TEST_CASE("weight_field: constant map, circle map and an explicit sphere map") {
  const GridPtr g = DiskGrid::build(64);
  const double e1[] = {1.0, 0.0};
  const ScalarField zero = weight_field(SphereField::constant(g, e1));
  const double a = 2.5;
  const ScalarField circle = weight_field(SphereField::from_function(g, 2, [a](double x, double, std::span<double> o) {
    o[0] = std::cos(a * x);
    o[1] = std::sin(a * x);
  }));
  // v = (sin x cos y, sin x sin y, cos x) has |grad v|^2 = 1 + sin^2 x.
  const ScalarField sphere = weight_field(SphereField::from_function(g, 3, [](double x, double y, std::span<double> o) {
    o[0] = std::sin(x) * std::cos(y);
    o[1] = std::sin(x) * std::sin(y);
    o[2] = std::cos(x);
  }));
  const double h = g->h();
  for (std::size_t k : g->interior_nodes()) {
    CHECK(zero[k] == 0.0);
    CHECK(std::abs(circle[k] - a * a) <= a * a * a * a * h * h / 10.0);
    const double s = std::sin(g->x(k));
    CHECK(std::abs(sphere[k] - (1 + s * s)) <= 0.5 * h * h);
    CHECK(sphere[k] >= 0.0);
  }
}

TEST_CASE("energies are invariant under a fixed rotation of the target") {
  const GridPtr g = DiskGrid::build(48);
  const SphereField v = fixture::wavy_sphere_map(g);
  const SphereField qv(g, 3, fixture::rotate_values(fixture::fixed_rotation3(), 3, v.values()));
  const ObstacleField lam = bumpy_lambda(g);
  const SplitEnergy a = split_energy(lam, v), b = split_energy(lam, qv);
  CHECK(std::abs(a.e_v - b.e_v) <= 1e-12 * a.e_v);
  CHECK(a.e_lambda == b.e_lambda);
  CHECK(std::abs(dirichlet_energy(assemble_u(lam, v)) - dirichlet_energy(assemble_u(lam, qv))) <= 1e-12 * a.total());
}

TEST_CASE("splitting identity gap shrinks at least linearly under refinement") {
  std::vector<double> gaps;
  for (int n : {32, 64, 128}) {
    const GridPtr g = DiskGrid::build(n);
    const ObstacleField lam = bumpy_lambda(g);
    const SphereField v = fixture::wavy_sphere_map(g);
    const SplitEnergy e = split_energy(lam, v);
    gaps.push_back(std::abs(dirichlet_energy(assemble_u(lam, v)) - e.total()) / (e.total() + 1.0));
  }
  CHECK(gaps[0] <= 0.05);
  CHECK(fixture::order(gaps[0], gaps[1]) >= 1.0);
  CHECK(fixture::order(gaps[1], gaps[2]) >= 1.0);
}
