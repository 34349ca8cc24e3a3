#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "fixtures.hpp"
#include "geobs/alternation.hpp"
#include "geobs/analysis.hpp"
#include "geobs/energy.hpp"
#include "oracles.hpp"

using namespace geobs;

namespace {

VectorField latitude(GridPtr g, double lambda_b, double beta) {
  return VectorField::from_function(g, 3, [=](double x, double y, std::span<double> o) {
    const double t = std::atan2(y, x);
    o[0] = lambda_b * std::sin(beta) * std::cos(t);
    o[1] = lambda_b * std::sin(beta) * std::sin(t);
    o[2] = lambda_b * std::cos(beta);
  });
}

CriticalConfig config(const DiskGrid& g) {
  CriticalConfig c;
  c.obstacle.relaxation = suggested_relaxation(g);
  return c;
}

// Shared partial-contact solve (lambda_b = 1.3, beta = 1.2) at n = 64.
const CriticalPoint& partial_contact() {
  static const CriticalPoint cp = [] {
    const GridPtr g = DiskGrid::build(64);
    return solve_critical(latitude(g, 1.3, 1.2), config(*g));
  }();
  return cp;
}

}  // namespace

TEST_CASE("critical: constant boundary data") {
  const GridPtr g = DiskGrid::build(32);
  const VectorField b = VectorField::from_function(g, 3, [](double, double, std::span<double> o) { o[0] = 1.5; });
  const CriticalPoint cp = solve_critical(b, config(*g));
  CHECK(cp.converged);
  for (std::size_t k : g->active_nodes()) {
    CHECK(cp.lambda[k] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(cp.v.value(k, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(cp.joint_report.tangential_residual <= 1e-20);
  CHECK(cp.joint_report.el.r_direct <= 1e-12);
}

TEST_CASE("critical: unit modulus on the boundary forces full contact") {
  const GridPtr g = DiskGrid::build(48);
  const CriticalPoint cp = solve_critical(latitude(g, 1.0, 0.4), config(*g));
  CHECK(cp.converged);
  double excess = 0.0;
  for (std::size_t k : g->active_nodes()) excess = std::max(excess, cp.lambda[k] - 1.0);
  CHECK(excess <= 1e-6);
  const KKTReport kkt = kkt_report(cp.lambda, weight_field(cp.v), default_contact_tol(*g));
  CHECK(kkt.contact_fraction == 1.0);
  CHECK(kkt.max_complementarity <= 1e-6);
  CHECK(std::abs(split_energy(cp.lambda, cp.v).total() - oracle::cap_energy(0.4)) <= 0.5 * g->h());
}

TEST_CASE("critical: partial contact against the equivariant oracle") {
  const CriticalPoint& cp = partial_contact();
  const DiskGrid& g = cp.lambda.grid();
  REQUIRE(cp.converged);
  const oracle::EquivariantMinimum ref = oracle::equivariant_minimum(1.3, 1.2, 10000);
  const double e = cp.energy_trace.back().total();
  CHECK(e <= 1.02 * ref.energy);
  CHECK(e >= 0.95 * ref.energy);
  const double rc = contact_radius(cp.lambda, 1e-9);
  CHECK(rc > 0.0);
  CHECK(std::abs(rc - ref.contact_radius) <= 3 * g.h());
  const auto curves = free_boundary(cp.lambda, default_contact_tol(g));
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].closed);
  CHECK(curves[0].circularity() >= 0.95);
  // Contact stays strictly inside: boundary-adjacent interior nodes are off the obstacle.
  for (std::size_t k : g.interior_nodes()) {
    if (std::hypot(g.x(k), g.y(k)) > 0.9) CHECK(cp.lambda[k] > 1.0);
  }
}

TEST_CASE("critical: energy trace is monotone and maps stay admissible") {
  const CriticalPoint& cp = partial_contact();
  const CriticalConfig c = config(cp.lambda.grid());
  REQUIRE(cp.energy_trace.size() >= 3);
  CHECK(cp.energy_trace.front().half == "init");
  for (std::size_t i = 1; i < cp.energy_trace.size(); ++i) {
    const double prev = cp.energy_trace[i - 1].total();
    CHECK(cp.energy_trace[i].total() <= prev + 10 * c.sphere.tol * std::max(1.0, prev));
  }
  for (const EnergyRecord& r : cp.energy_trace) CHECK(r.min_modulus >= 1.0 - 1e-9);
  CHECK(cp.joint_report.kkt.max_complementarity <= c.joint_tol);
  CHECK(cp.joint_report.tangential_residual <= c.joint_tol);
}

TEST_CASE("resume: identity, converged points and split runs") {
  const GridPtr g = DiskGrid::build(32);
  CriticalConfig c = config(*g);
  const VectorField b = latitude(g, 1.3, 1.2);
  const CriticalPoint full = solve_critical(b, c);
  const CriticalPoint zero = resume(full, 0, c);
  CHECK(zero.lambda.values() == full.lambda.values());
  CHECK(zero.energy_trace.size() == full.energy_trace.size());
  const CriticalPoint again = resume(full, 5, c);
  CHECK(fixture::max_diff(again.lambda.values(), full.lambda.values()) <= 10 * c.obstacle.tol);
  CHECK(fixture::max_diff(again.v.values(), full.v.values()) <= 1e-6);

  CriticalConfig two = c, three = c, one = c;
  two.max_outer = 2;
  three.max_outer = 3;
  one.max_outer = 1;
  const CriticalPoint direct = solve_critical(b, three);
  const CriticalPoint split = resume(solve_critical(b, two), 1, one);
  CHECK(split.lambda.values() == direct.lambda.values());
  CHECK(split.v.values() == direct.v.values());
  CHECK(split.energy_trace.size() == direct.energy_trace.size());
}

TEST_CASE("critical: re-solving from the output's own boundary reproduces it") {
  const GridPtr g = DiskGrid::build(32);
  const CriticalConfig c = config(*g);
  const CriticalPoint first = solve_critical(latitude(g, 1.3, 1.2), c);
  const CriticalPoint second = solve_critical(assemble_u(first.lambda, first.v), c);
  CHECK(fixture::max_diff(first.lambda.values(), second.lambda.values()) <= 10 * c.obstacle.tol);
  CHECK(fixture::max_diff(first.v.values(), second.v.values()) <= 1e-6);
}

TEST_CASE("critical: boundary modulus below one and failing half-steps") {
  const GridPtr g = DiskGrid::build(24);
  CHECK_THROWS_AS(solve_critical(latitude(g, 0.9, 0.4), config(*g)), DomainError);
  CriticalConfig c = config(*g);
  c.sphere.max_iters = 1;
  try {
    solve_critical(latitude(g, 1.3, 1.2), c);
    FAIL("expected non-convergence");
  } catch (const CriticalNonConvergence& e) {
    CHECK(std::string(e.what()).find("v half-step") != std::string::npos);
    CHECK(!e.partial().energy_trace.empty());
    CHECK_FALSE(e.partial().converged);
  }
  CriticalConfig short_run = config(*g);
  short_run.max_outer = 1;
  CHECK_FALSE(solve_critical(latitude(g, 1.3, 1.2), short_run).converged);
}

TEST_CASE("checkpoints round-trip exactly") {
  const CriticalPoint& cp = partial_contact();
  const auto dir = std::filesystem::temp_directory_path() / "geobs_checkpoint_test";
  std::filesystem::remove_all(dir);
  write_checkpoint(dir, cp);
  const CriticalPoint back = read_checkpoint(dir);
  CHECK(back.lambda.values() == cp.lambda.values());
  CHECK(back.v.values() == cp.v.values());
  CHECK(back.converged == cp.converged);
  REQUIRE(back.energy_trace.size() == cp.energy_trace.size());
  for (std::size_t i = 0; i < cp.energy_trace.size(); ++i) {
    CHECK(back.energy_trace[i].total() == cp.energy_trace[i].total());
    CHECK(back.energy_trace[i].half == cp.energy_trace[i].half);
  }
  CHECK(back.joint_report.kkt.max_complementarity == cp.joint_report.kkt.max_complementarity);
  CHECK_THROWS_AS(read_checkpoint(dir, DiskGrid::build(32)), GridMismatch);
  std::filesystem::remove(dir / "trace.json");
  CHECK_THROWS_AS(read_checkpoint(dir), FormatError);
  std::filesystem::remove_all(dir);
}
