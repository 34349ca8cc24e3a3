#include "geobs/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "geobs/errors.hpp"

namespace geobs {
namespace {

// Active nodes never touch the lattice edge, so the four neighbours of a
// supported node are always valid indices.
bool neighbours_in(const std::vector<std::uint8_t>& mask, const DiskGrid& g, std::size_t k) {
  const std::size_t n = static_cast<std::size_t>(g.n());
  return mask[k - 1] && mask[k + 1] && mask[k - n] && mask[k + n];
}

std::vector<std::uint8_t> stencil_support(const NodeField& f) {
  const DiskGrid& g = f.grid();
  std::vector<std::uint8_t> mask(g.node_count(), 0);
  for (std::size_t k : g.active_nodes()) {
    if (neighbours_in(f.support(), g, k)) mask[k] = 1;
  }
  return mask;
}

CovectorField centered_gradient(const NodeField& f, bool rotate) {
  const DiskGrid& g = f.grid();
  const std::size_t n = static_cast<std::size_t>(g.n());
  const int w = f.width();
  const double inv2h = 0.5 / g.h();
  auto mask = stencil_support(f);
  std::vector<double> out(g.node_count() * 2 * static_cast<std::size_t>(w), 0.0);
  const auto& v = f.values();
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (!mask[k]) continue;
    for (int c = 0; c < w; ++c) {
      const double dx = (v[(k + 1) * w + c] - v[(k - 1) * w + c]) * inv2h;
      const double dy = (v[(k + n) * w + c] - v[(k - n) * w + c]) * inv2h;
      double* dst = &out[k * 2 * w + 2 * c];
      if (rotate) {
        dst[0] = -dy;
        dst[1] = dx;
      } else {
        dst[0] = dx;
        dst[1] = dy;
      }
    }
  }
  return CovectorField(f.grid_ptr(), w, std::move(out), std::move(mask));
}

VectorField centered_div_or_curl(const CovectorField& F, bool is_curl) {
  const DiskGrid& g = F.grid();
  const std::size_t n = static_cast<std::size_t>(g.n());
  const int channels = F.channels();
  const double inv2h = 0.5 / g.h();
  auto mask = stencil_support(F);
  std::vector<double> out(g.node_count() * static_cast<std::size_t>(channels), 0.0);
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (!mask[k]) continue;
    for (int c = 0; c < channels; ++c) {
      const auto e = F.at_channel(k + 1, c);
      const auto wv = F.at_channel(k - 1, c);
      const auto nv = F.at_channel(k + n, c);
      const auto s = F.at_channel(k - n, c);
      out[k * channels + c] = is_curl ? (e[1] - wv[1] - (nv[0] - s[0])) * inv2h
                                      : (e[0] - wv[0] + nv[1] - s[1]) * inv2h;
    }
  }
  return VectorField(F.grid_ptr(), channels, std::move(out), std::move(mask));
}

double finite_p(double p) {
  if (!(p >= 1.0)) throw DomainError("norm exponent must be >= 1");
  return p;
}

}  // namespace

CovectorField gradient(const NodeField& f) { return centered_gradient(f, false); }

CovectorField perp_gradient(const NodeField& f) { return centered_gradient(f, true); }

VectorField divergence(const CovectorField& F) { return centered_div_or_curl(F, false); }

ScalarField scalar_divergence(const CovectorField& F) {
  if (F.channels() != 1) throw DomainError("scalar_divergence needs a single-channel field");
  VectorField d = divergence(F);
  return ScalarField(d.grid_ptr(), d.values(), d.support());
}

VectorField curl(const CovectorField& F) { return centered_div_or_curl(F, true); }

VectorField laplacian(const VectorField& f) {
  const DiskGrid& g = f.grid();
  const std::size_t n = static_cast<std::size_t>(g.n());
  const int w = f.width();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  auto mask = stencil_support(f);
  std::vector<double> out(g.node_count() * static_cast<std::size_t>(w), 0.0);
  const auto& v = f.values();
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (!mask[k] || !f.defined(k)) {
      mask[k] = 0;
      continue;
    }
    for (int c = 0; c < w; ++c) {
      out[k * w + c] = (v[(k + 1) * w + c] + v[(k - 1) * w + c] + v[(k + n) * w + c] +
                        v[(k - n) * w + c] - 4.0 * v[k * w + c]) *
                       inv_h2;
    }
  }
  return VectorField(f.grid_ptr(), w, std::move(out), std::move(mask));
}

ScalarField laplacian(const ScalarField& f) {
  VectorField as_vec(f.grid_ptr(), 1, f.values(), f.support());
  VectorField l = laplacian(as_vec);
  return ScalarField(l.grid_ptr(), l.values(), l.support());
}

VectorField weighted_laplacian(const ScalarField& w, const VectorField& f) {
  require_same_grid(w.grid(), f.grid());
  const DiskGrid& g = f.grid();
  const std::size_t n = static_cast<std::size_t>(g.n());
  const int width = f.width();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  auto mask = stencil_support(f);
  std::vector<double> out(g.node_count() * static_cast<std::size_t>(width), 0.0);
  const auto& v = f.values();
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (!mask[k] || !f.defined(k)) {
      mask[k] = 0;
      continue;
    }
    const std::size_t nb[4] = {k + 1, k - 1, k + n, k - n};
    double edge[4];
    for (int e = 0; e < 4; ++e) edge[e] = 0.5 * (w[k] + w[nb[e]]);
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int e = 0; e < 4; ++e) acc += edge[e] * (v[nb[e] * width + c] - v[k * width + c]);
      out[k * width + c] = acc * inv_h2;
    }
  }
  return VectorField(f.grid_ptr(), width, std::move(out), std::move(mask));
}

CovectorField scale(const CovectorField& F, const ScalarField& w) {
  require_same_grid(F.grid(), w.grid());
  std::vector<double> out(F.values());
  std::vector<std::uint8_t> mask(F.support());
  const std::size_t width = static_cast<std::size_t>(F.width());
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (!w.defined(k)) mask[k] = 0;
    for (std::size_t c = 0; c < width; ++c) out[k * width + c] *= mask[k] ? w[k] : 0.0;
  }
  return CovectorField(F.grid_ptr(), F.channels(), std::move(out), std::move(mask));
}

std::vector<std::size_t> ball_nodes(const DiskGrid& grid, Point center, double r) {
  std::vector<std::size_t> nodes;
  const double r2 = r * r;
  for (std::size_t k : grid.active_nodes()) {
    const double dx = grid.x(k) - center.x;
    const double dy = grid.y(k) - center.y;
    if (dx * dx + dy * dy < r2) nodes.push_back(k);
  }
  return nodes;
}

double ball_norm(const NodeField& F, Point center, double r, double p) {
  if (!(r > 0.0)) throw DomainError("ball radius must be positive");
  if (std::hypot(center.x, center.y) + r > 1.0 + 1e-14) {
    throw DomainError("ball is not contained in the unit disk");
  }
  const bool inf = std::isinf(p);
  if (!inf) finite_p(p);
  const double h2 = F.grid().h() * F.grid().h();
  double acc = 0.0;
  for (std::size_t k : ball_nodes(F.grid(), center, r)) {
    if (!F.defined(k)) continue;
    const double m = F.node_norm(k);
    if (inf) {
      acc = std::max(acc, m);
    } else {
      acc += std::pow(m, p) * h2;
    }
  }
  return inf ? acc : std::pow(acc, 1.0 / p);
}

double l2_norm(const NodeField& f) {
  const double h2 = f.grid().h() * f.grid().h();
  double acc = 0.0;
  for (std::size_t k = 0; k < f.grid().node_count(); ++k) {
    if (!f.defined(k)) continue;
    for (double v : f.at(k)) acc += v * v;
  }
  return std::sqrt(acc * h2);
}

double max_norm(const NodeField& f) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.grid().node_count(); ++k) {
    if (f.defined(k)) m = std::max(m, f.node_norm(k));
  }
  return m;
}

}  // namespace geobs
