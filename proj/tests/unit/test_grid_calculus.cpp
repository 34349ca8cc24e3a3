#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "geobs/calculus.hpp"
#include "geobs/errors.hpp"
#include "geobs/field_io.hpp"
#include "oracles.hpp"

using namespace geobs;

TEST_CASE("grid: tiny resolution still has interior nodes inside the circle") {
  const GridPtr g = DiskGrid::build(8);
  CHECK(!g->interior_nodes().empty());
  for (std::size_t k : g->active_nodes()) CHECK(g->x(k) * g->x(k) + g->y(k) * g->y(k) < 1.0);
}

TEST_CASE("grid: resolution below eight is rejected") {
  CHECK_THROWS_AS(DiskGrid::build(7), InvalidResolution);
  CHECK_NOTHROW(DiskGrid::build(8));
}

TEST_CASE("grid: node counts agree with direct lattice enumeration") {
  for (int n : {16, 64, 101}) {
    const GridPtr g = DiskGrid::build(n);
    CHECK(g->active_nodes().size() == oracle::lattice_count(n, 1.0));
    CHECK(g->interior_nodes().size() + g->boundary_nodes().size() == g->active_nodes().size());
  }
  const GridPtr g = DiskGrid::build(64);
  // One boundary-layer ring of about 2 pi / h nodes is not interior.
  const double expected = std::numbers::pi / (g->h() * g->h()) * (1.0 - 2.0 * g->h());
  CHECK(std::abs(static_cast<double>(g->interior_nodes().size()) - expected) <= 0.05 * expected);
}

TEST_CASE("grid: interior nodes have four active neighbours, boundary nodes do not") {
  const GridPtr g = DiskGrid::build(40);
  const int n = g->n();
  auto all_active = [&](std::size_t k) {
    const int i = g->col(k), j = g->row(k);
    return g->active(g->index(i + 1, j)) && g->active(g->index(i - 1, j)) && g->active(g->index(i, j + 1)) &&
           g->active(g->index(i, j - 1));
  };
  for (std::size_t k : g->interior_nodes()) CHECK(all_active(k));
  for (std::size_t k : g->boundary_nodes()) {
    const int i = g->col(k), j = g->row(k);
    if (i == 0 || j == 0 || i == n - 1 || j == n - 1) continue;
    CHECK_FALSE(all_active(k));
  }
}

TEST_CASE("gradient: constants, affine functions and quadratics are exact") {
  const GridPtr g = DiskGrid::build(33);
  const CovectorField zero = gradient(ScalarField::constant(g, 2.5));
  const CovectorField affine = gradient(ScalarField::from_function(g, [](double x, double y) { return 3 * x - 2 * y; }));
  const CovectorField quad = gradient(ScalarField::from_function(g, [](double x, double) { return x * x; }));
  std::size_t defined = 0;
  for (std::size_t k : g->active_nodes()) {
    if (!affine.defined(k)) continue;
    ++defined;
    CHECK(zero.at_channel(k, 0)[0] == 0.0);
    CHECK(zero.at_channel(k, 0)[1] == 0.0);
    CHECK(affine.at_channel(k, 0)[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(affine.at_channel(k, 0)[1] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(std::abs(quad.at_channel(k, 0)[0] - 2.0 * g->x(k)) <= 1e-12);
  }
  CHECK(defined == g->interior_nodes().size());
}

TEST_CASE("divergence: constants and gradients of harmonic quadratics vanish") {
  const GridPtr g = DiskGrid::build(33);
  const CovectorField c = CovectorField::from_function(g, 1, [](double, double, std::span<double> o) {
    o[0] = 1.7;
    o[1] = -0.3;
  });
  const CovectorField h = CovectorField::from_function(g, 1, [](double x, double y, std::span<double> o) {
    o[0] = 2 * x;
    o[1] = -2 * y;
  });
  const ScalarField dc = scalar_divergence(c), dh = scalar_divergence(h);
  CHECK(dc.support_size() > 0);
  for (std::size_t k : g->active_nodes()) {
    if (!dc.defined(k)) continue;
    CHECK(std::abs(dc[k]) <= 1e-12);
    CHECK(std::abs(dh[k]) <= 1e-12);
  }
}

TEST_CASE("divergence is the negative adjoint of the gradient") {
  const GridPtr g = DiskGrid::build(48);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField f = ScalarField::from_function(g, [&](double, double) { return u(rng); });
    const CovectorField phi = CovectorField::from_function(g, 1, [&](double x, double y, std::span<double> o) {
      const bool inside = x * x + y * y < 0.6;
      o[0] = inside ? u(rng) : 0.0;
      o[1] = inside ? u(rng) : 0.0;
    });
    const CovectorField gf = gradient(f);
    const ScalarField dphi = scalar_divergence(phi);
    double lhs = 0.0, rhs = 0.0, scale = 0.0;
    for (std::size_t k : g->active_nodes()) {
      if (gf.defined(k)) {
        const auto a = gf.at_channel(k, 0), b = phi.at_channel(k, 0);
        lhs += a[0] * b[0] + a[1] * b[1];
        scale += std::abs(a[0] * b[0]) + std::abs(a[1] * b[1]);
      }
      if (dphi.defined(k)) rhs -= f[k] * dphi[k];
    }
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("laplacian: affine and harmonic quadratics vanish, |x|^2 gives four") {
  const GridPtr g = DiskGrid::build(29);
  const ScalarField a = laplacian(ScalarField::from_function(g, [](double x, double y) { return 1 + x - 4 * y; }));
  const ScalarField r2 = laplacian(ScalarField::from_function(g, [](double x, double y) { return x * x + y * y; }));
  const ScalarField hq = laplacian(ScalarField::from_function(g, [](double x, double y) { return x * x - y * y; }));
  for (std::size_t k : g->interior_nodes()) {
    CHECK(std::abs(a[k]) <= 1e-10);
    CHECK(r2[k] == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(std::abs(hq[k]) <= 1e-10);
  }
}

TEST_CASE("laplacian: the wide composite equals the five-point stencil at spacing 2h") {
  const GridPtr g = DiskGrid::build(41);
  const ScalarField f = ScalarField::from_function(g, [](double x, double y) { return std::sin(3 * x) * std::exp(y); });
  const ScalarField wide = scalar_divergence(gradient(f));
  const double h = g->h();
  for (std::size_t k : g->active_nodes()) {
    if (!wide.defined(k)) continue;
    const int i = g->col(k), j = g->row(k);
    const double direct = (f[g->index(i + 2, j)] + f[g->index(i - 2, j)] + f[g->index(i, j + 2)] +
                           f[g->index(i, j - 2)] - 4 * f[k]) /
                          (4 * h * h);
    CHECK(std::abs(wide[k] - direct) <= 1e-9);
  }
}

TEST_CASE("ball_norm: zero field, unit field against lattice count, ball outside the disk") {
  const GridPtr g = DiskGrid::build(64);
  const CovectorField zero(g, 1);
  CHECK(ball_norm(zero, {0, 0}, 0.5, 2.0) == 0.0);
  const CovectorField unit = CovectorField::from_function(g, 1, [](double, double, std::span<double> o) {
    o[0] = 1.0;
    o[1] = 0.0;
  });
  const double h = g->h();
  const double lattice = std::sqrt(static_cast<double>(oracle::lattice_count(64, 0.5)) * h * h);
  CHECK(ball_norm(unit, {0, 0}, 0.5, 2.0) == doctest::Approx(lattice).epsilon(1e-12));
  CHECK(std::abs(lattice - std::sqrt(std::numbers::pi * 0.25)) <= 2 * h);
  CHECK(ball_norm(unit, {0, 0}, 0.5, kInfNorm) == 1.0);
  CHECK_THROWS_AS(ball_norm(unit, {0.7, 0}, 0.5, 2.0), DomainError);
  CHECK_THROWS_AS(ball_norm(unit, {0, 0}, 0.5, 0.5), DomainError);
}

TEST_CASE("fields reject non-finite values and mismatched sizes") {
  const GridPtr g = DiskGrid::build(10);
  std::vector<double> v(g->node_count(), 1.0);
  v[g->active_nodes()[3]] = std::nan("");
  CHECK_THROWS(ScalarField(g, v));
  CHECK_THROWS(ScalarField(g, std::vector<double>(5, 1.0)));
}

TEST_CASE("field files round-trip bit for bit") {
  const GridPtr g = DiskGrid::build(21);
  const VectorField f = VectorField::from_function(g, 3, [](double x, double y, std::span<double> o) {
    o[0] = std::sin(x) / 3.0;
    o[1] = std::exp(y) * 1e-17;
    o[2] = -x * y / 7.0;
  });
  const auto dir = std::filesystem::temp_directory_path() / "geobs_field_roundtrip";
  std::filesystem::create_directories(dir);
  write_field(dir / "f", f, "test");
  const LoadedField back = read_field(dir / "f", g);
  CHECK(back.width == 3);
  CHECK(back.kind == "test");
  CHECK(back.values == f.values());
  CHECK(back.support == f.support());
  CHECK_THROWS_AS(read_field(dir / "f", DiskGrid::build(22)), GridMismatch);
  CHECK_THROWS_AS(read_field(dir / "missing"), FormatError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("format_double is shortest round-trip") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) CHECK(parse_double(format_double(x)) == x);
  CHECK(format_double(0.1) == "0.1");
  CHECK_THROWS_AS(parse_double("1.0x"), FormatError);
}
