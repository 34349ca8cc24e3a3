#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "geobs/analysis.hpp"
#include "geobs/obstacle.hpp"
#include "oracles.hpp"

using namespace geobs;

namespace {

ObstacleSolveConfig tight() {
  ObstacleSolveConfig c;
  c.tol = 1e-10;
  c.max_iters = 50000;
  return c;
}

ScalarField random_weight(GridPtr g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  return ScalarField::from_function(g, [&](double, double) { return u(rng); });
}

}  // namespace

TEST_CASE("obstacle: zero weight keeps constant boundary data") {
  const GridPtr g = DiskGrid::build(32);
  const ScalarField zero = ScalarField::constant(g, 0.0);
  for (double b : {1.0, 1.5}) {
    const ObstacleSolution s = solve_obstacle(zero, ObstacleField::constant(g, b), tight());
    for (std::size_t k : g->active_nodes()) CHECK(std::abs(s.lambda[k] - b) <= 1e-12);
  }
}

TEST_CASE("obstacle: radial problem matches the Bessel closed form") {
  const GridPtr g = DiskGrid::build(128);
  const oracle::RadialObstacle exact = oracle::radial_obstacle_bessel(4.0, 1.05);
  ObstacleSolveConfig c;
  c.relaxation = suggested_relaxation(*g);
  const ObstacleSolution s = solve_obstacle(ScalarField::constant(g, 4.0), ObstacleField::constant(g, 1.05), c);
  double err = 0.0;
  for (std::size_t k : g->interior_nodes()) {
    const double ref = exact(std::hypot(g->x(k), g->y(k)));
    err = std::max(err, std::abs(s.lambda[k] - ref) / ref);
  }
  CHECK(err <= 0.01);
  CHECK(std::abs(contact_radius(s.lambda, 1e-9) - exact.rho) <= 2 * g->h());
  CHECK(subharmonicity_margin(s.lambda) >= -1e-6);
  CHECK(s.report.max_complementarity <= 1e-6);
}

TEST_CASE("kkt_report: full contact and harmonic data") {
  const GridPtr g = DiskGrid::build(24);
  const KKTReport full = kkt_report(ScalarField::constant(g, 1.0), ScalarField::constant(g, 1.0), default_contact_tol(*g));
  CHECK(full.max_interior_residual == doctest::Approx(1.0));
  CHECK(full.max_complementarity == 0.0);
  CHECK(full.max_negativity == 0.0);
  CHECK(full.contact_fraction == 1.0);
  const ScalarField harmonic = ScalarField::from_function(g, [](double x, double y) { return 3 + x * x - y * y + x; });
  const KKTReport hr = kkt_report(harmonic, ScalarField::constant(g, 0.0), default_contact_tol(*g));
  CHECK(hr.max_interior_residual <= 1e-11);
  CHECK(hr.max_complementarity <= 1e-11);
  CHECK(hr.contact_fraction == 0.0);
}

TEST_CASE("subharmonicity_margin: exact values on quadratics") {
  const GridPtr g = DiskGrid::build(24);
  CHECK(subharmonicity_margin(ScalarField::constant(g, 1.0)) == 0.0);
  const ScalarField q = ScalarField::from_function(g, [](double x, double) { return 1 + x * x; });
  CHECK(subharmonicity_margin(q) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("obstacle: unit boundary data forces full contact for any non-negative weight") {
  const GridPtr g = DiskGrid::build(32);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ObstacleSolution s = solve_obstacle(random_weight(g, seed), ObstacleField::constant(g, 1.0), tight());
    for (std::size_t k : g->active_nodes()) CHECK(s.lambda[k] - 1.0 <= 1e-10);
  }
}

TEST_CASE("obstacle: raising boundary values never lowers the solution") {
  const GridPtr g = DiskGrid::build(32);
  const ScalarField w = random_weight(g, 11);
  const ObstacleField low = ObstacleField::from_function(g, [](double x, double y) { return 1.1 + 0.2 * x * y; });
  const ObstacleField high = ObstacleField::from_function(g, [](double x, double y) { return 1.3 + 0.2 * x * y + 0.1 * x; });
  const ObstacleSolution a = solve_obstacle(w, low, tight()), b = solve_obstacle(w, high, tight());
  for (std::size_t k : g->active_nodes()) CHECK(b.lambda[k] >= a.lambda[k] - 1e-9);
}

TEST_CASE("obstacle: objective never increases across sweeps") {
  const GridPtr g = DiskGrid::build(40);
  ObstacleSolveConfig c = tight();
  c.record_objective = true;
  const ObstacleSolution s = solve_obstacle(random_weight(g, 5), ObstacleField::constant(g, 1.4), c);
  REQUIRE(s.objective_trace.size() >= 2);
  for (std::size_t i = 1; i < s.objective_trace.size(); ++i) {
    CHECK(s.objective_trace[i] <= s.objective_trace[i - 1] + 1e-13 * std::abs(s.objective_trace[i - 1]));
  }
  CHECK(s.objective_trace.back() == doctest::Approx(obstacle_objective(s.lambda, random_weight(g, 5))).epsilon(1e-12));
}

TEST_CASE("obstacle: different initial guesses reach the same solution") {
  const GridPtr g = DiskGrid::build(40);
  const ScalarField w = random_weight(g, 9);
  ObstacleSolveConfig c;
  c.tol = 1e-9;
  c.max_iters = 50000;
  std::vector<double> start_b(g->node_count(), 0.0);
  for (std::size_t k : g->active_nodes()) start_b[k] = g->interior(k) ? 3.0 : 1.2;
  const ObstacleSolution a = solve_obstacle(w, ObstacleField::constant(g, 1.2), c);
  const ObstacleSolution b = solve_obstacle(w, ObstacleField(g, start_b), c);
  CHECK(fixture::max_diff(a.lambda.values(), b.lambda.values()) <= 10 * c.tol);
}

TEST_CASE("obstacle: invalid input and exhausted budgets") {
  const GridPtr g = DiskGrid::build(32);
  CHECK_THROWS_AS(solve_obstacle(ScalarField::constant(g, -1.0), ObstacleField::constant(g, 1.2), tight()), DomainError);
  ObstacleSolveConfig bad;
  bad.relaxation = 2.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  ObstacleSolveConfig one;
  one.max_iters = 1;
  one.check_interval = 1;
  try {
    solve_obstacle(ScalarField::constant(g, 4.0), ObstacleField::constant(g, 1.05), one);
    FAIL("expected non-convergence");
  } catch (const ObstacleNonConvergence& e) {
    CHECK(e.sweeps() == 1);
    CHECK(e.report().max_complementarity > one.tol);
  }
}
