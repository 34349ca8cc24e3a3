#include "geobs/energy.hpp"

#include "geobs/calculus.hpp"
#include "geobs/errors.hpp"

namespace geobs {
namespace {

double sq_dist(const VectorField& v, std::size_t a, std::size_t b) {
  double s = 0.0;
  const auto va = v.at(a);
  const auto vb = v.at(b);
  for (std::size_t c = 0; c < va.size(); ++c) {
    const double d = va[c] - vb[c];
    s += d * d;
  }
  return s;
}

// Visits each edge (a, b) between active nodes once, b being the right or
// upper neighbour of a.
template <class Fn>
void for_each_edge(const DiskGrid& g, Fn&& fn) {
  const std::size_t n = static_cast<std::size_t>(g.n());
  for (std::size_t a : g.active_nodes()) {
    if (g.active(a + 1)) fn(a, a + 1);
    if (g.active(a + n)) fn(a, a + n);
  }
}

}  // namespace

double dirichlet_energy(const VectorField& u) {
  double e = 0.0;
  for_each_edge(u.grid(), [&](std::size_t a, std::size_t b) { e += sq_dist(u, a, b); });
  return e;
}

SplitEnergy split_energy(const ScalarField& lambda, const VectorField& v) {
  require_same_grid(lambda.grid(), v.grid());
  SplitEnergy out;
  for_each_edge(v.grid(), [&](std::size_t a, std::size_t b) {
    const double d = lambda[a] - lambda[b];
    out.e_lambda += d * d;
    out.e_v += 0.5 * (lambda[a] * lambda[a] + lambda[b] * lambda[b]) * sq_dist(v, a, b);
  });
  return out;
}

ScalarField weight_field(const VectorField& v) {
  const DiskGrid& g = v.grid();
  const std::size_t n = static_cast<std::size_t>(g.n());
  const double scale = 0.5 / (g.h() * g.h());
  std::vector<double> out(g.node_count(), 0.0);
  std::vector<std::uint8_t> mask(g.node_count(), 0);
  for (std::size_t a : g.interior_nodes()) {
    out[a] = scale * (sq_dist(v, a, a + 1) + sq_dist(v, a, a - 1) + sq_dist(v, a, a + n) +
                      sq_dist(v, a, a - n));
    mask[a] = 1;
  }
  return ScalarField(v.grid_ptr(), std::move(out), std::move(mask));
}

ScalarField centered_gradient_energy_density(const VectorField& v) {
  const CovectorField grad = gradient(v);
  const DiskGrid& g = v.grid();
  std::vector<double> out(g.node_count(), 0.0);
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (!grad.defined(k)) continue;
    double s = 0.0;
    for (double c : grad.at(k)) s += c * c;
    out[k] = s;
  }
  return ScalarField(v.grid_ptr(), std::move(out), grad.support());
}

}  // namespace geobs
