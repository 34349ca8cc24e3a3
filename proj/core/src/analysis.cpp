#include "geobs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "geobs/energy.hpp"
#include "geobs/poisson.hpp"

namespace geobs {
namespace {

void require_ball_in_disk(const Ball& ball) {
  if (!(ball.radius > 0.0)) throw DomainError("ball radius must be positive");
  if (std::hypot(ball.center.x, ball.center.y) + ball.radius > 1.0 + 1e-14) {
    throw DomainError("ball is not contained in the unit disk");
  }
}

std::vector<std::uint8_t> ball_mask(const DiskGrid& g, const Ball& ball) {
  std::vector<std::uint8_t> mask(g.node_count(), 0);
  for (std::size_t k : ball_nodes(g, ball.center, ball.radius)) mask[k] = 1;
  return mask;
}

// Sum of squared differences over lattice edges, i.e. the discrete Dirichlet
// energy whose gradient is the 5-point Laplacian.
double edge_dirichlet(const DiskGrid& g, const std::vector<double>& w) {
  const std::size_t n = static_cast<std::size_t>(g.n());
  double e = 0.0;
  for (std::size_t a : g.active_nodes()) {
    if (g.active(a + 1)) e += (w[a] - w[a + 1]) * (w[a] - w[a + 1]);
    if (g.active(a + n)) e += (w[a] - w[a + n]) * (w[a] - w[a + n]);
  }
  return e;
}

double ball_l2(const CovectorField& F, const std::vector<std::uint8_t>& mask) {
  const double h2 = F.grid().h() * F.grid().h();
  double acc = 0.0;
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (!mask[k]) continue;
    if (!F.defined(k)) throw DomainError("gradient undefined at a ball node");
    for (double v : F.at(k)) acc += v * v;
  }
  return std::sqrt(acc * h2);
}

}  // namespace

HodgeParts hodge_decompose(const CovectorField& F, Ball ball, double tol) {
  require_ball_in_disk(ball);
  const DiskGrid& g = F.grid();
  const int channels = F.channels();
  const auto mask = ball_mask(g, ball);
  const VectorField divF = divergence(F);
  const VectorField curlF = curl(F);
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (mask[k] && !divF.defined(k)) {
      throw DomainError("input field is not defined around ball node " + std::to_string(k));
    }
  }

  const std::size_t nodes = g.node_count();
  std::vector<double> a(nodes * channels, 0.0), b(nodes * channels, 0.0);
  std::vector<double> f(nodes, 0.0);
  const std::vector<double> zero(nodes, 0.0);
  int iterations = 0;
  for (int c = 0; c < channels; ++c) {
    for (int which = 0; which < 2; ++which) {
      const VectorField& src = which == 0 ? divF : curlF;
      for (std::size_t k = 0; k < nodes; ++k) f[k] = mask[k] ? src.value(k, c) : 0.0;
      const PoissonResult r = solve_poisson(g, Stencil::wide, mask, f, zero, tol);
      iterations += r.iterations;
      std::vector<double>& dst = which == 0 ? a : b;
      for (std::size_t k = 0; k < nodes; ++k) dst[k * channels + c] = r.u[k];
    }
  }
  VectorField fa(F.grid_ptr(), channels, std::move(a));
  VectorField fb(F.grid_ptr(), channels, std::move(b));
  const CovectorField ga = gradient(fa);
  const CovectorField gb = perp_gradient(fb);

  const std::size_t width = static_cast<std::size_t>(F.width());
  std::vector<double> h(nodes * width, 0.0);
  std::vector<std::uint8_t> hmask(nodes, 0);
  for (std::size_t k = 0; k < nodes; ++k) {
    if (!mask[k] || !F.defined(k) || !ga.defined(k) || !gb.defined(k)) continue;
    hmask[k] = 1;
    for (std::size_t e = 0; e < width; ++e) {
      h[k * width + e] = F.values()[k * width + e] - ga.values()[k * width + e] - gb.values()[k * width + e];
    }
  }
  CovectorField H(F.grid_ptr(), channels, std::move(h), std::move(hmask));

  HodgeParts out{std::move(fa), std::move(fb), H, ball, 0.0, 0.0, 0.0, iterations};
  for (std::size_t k = 0; k < nodes; ++k) {
    if (!H.defined(k)) continue;
    for (std::size_t e = 0; e < width; ++e) {
      const double rec = ga.values()[k * width + e] + gb.values()[k * width + e] + H.values()[k * width + e];
      out.reconstruction_error = std::max(out.reconstruction_error, std::abs(F.values()[k * width + e] - rec));
    }
  }
  const VectorField divH = divergence(H);
  const VectorField curlH = curl(H);
  for (std::size_t k = 0; k < nodes; ++k) {
    if (!mask[k]) continue;
    for (int c = 0; c < channels; ++c) {
      if (divH.defined(k)) out.max_div_H = std::max(out.max_div_H, std::abs(divH.value(k, c)));
      if (curlH.defined(k)) out.max_curl_H = std::max(out.max_curl_H, std::abs(curlH.value(k, c)));
    }
  }
  return out;
}

std::vector<double> geometric_radii(double r_min, double r_max, int count) {
  if (count < 2 || !(r_min > 0.0) || !(r_max > r_min)) {
    throw DomainError("geometric_radii needs 0 < r_min < r_max and count >= 2");
  }
  std::vector<double> r(static_cast<std::size_t>(count));
  const double q = std::log(r_max / r_min) / (count - 1);
  for (int i = 0; i < count; ++i) r[i] = r_min * std::exp(q * i);
  r.back() = r_max;
  return r;
}

DecayFit decay_fit(const NodeField& F, Point center, const std::vector<double>& radii, double p) {
  if (radii.size() < 5) throw DomainError("decay fits need at least 5 radii");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw DomainError("radii must be strictly increasing");
  }
  DecayFit fit;
  fit.center = center;
  fit.radii = radii;
  fit.p = p;
  for (double r : radii) fit.norms.push_back(ball_norm(F, center, r, p));
  const double biggest = *std::max_element(fit.norms.begin(), fit.norms.end());
  if (!(biggest > 1e-12) ||
      std::any_of(fit.norms.begin(), fit.norms.end(), [&](double v) { return !(v > 1e-12 * biggest); })) {
    fit.degenerate = true;
    return fit;
  }
  const double m = static_cast<double>(radii.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    sx += std::log(radii[i]);
    sy += std::log(fit.norms[i]);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double dx = std::log(radii[i]) - mx;
    const double dy = std::log(fit.norms[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.fitted_slope = sxy / sxx;
  const double ss_res = syy - fit.fitted_slope * sxy;
  fit.r_squared = syy > 0.0 ? 1.0 - std::max(ss_res, 0.0) / syy : 1.0;
  return fit;
}

DecayFit harmonic_decay_check(const CovectorField& H, const Ball& ball, double p,
                              const std::vector<double>& radii) {
  if (!radii.empty() && radii.back() > ball.radius + 1e-14) {
    throw DomainError("decay radii exceed the Hodge ball");
  }
  return decay_fit(H, ball.center, radii, p);
}

std::vector<DecayFit> morrey_fit(const NodeField& F, const std::vector<Point>& centers,
                                 const std::vector<double>& radii, double p) {
  std::vector<DecayFit> out;
  out.reserve(centers.size());
  for (const Point& c : centers) out.push_back(decay_fit(F, c, radii, p));
  return out;
}

WenteReport wente_check(const ScalarField& a, const ScalarField& b, Ball ball, double tol) {
  require_same_grid(a.grid(), b.grid());
  require_ball_in_disk(ball);
  const DiskGrid& g = a.grid();
  const auto mask = ball_mask(g, ball);
  const CovectorField ga = gradient(a);
  const CovectorField gb = perp_gradient(b);

  WenteReport rep;
  rep.grad_a_l2 = ball_l2(ga, mask);
  rep.grad_b_l2 = ball_l2(gradient(b), mask);
  const double denom = rep.grad_a_l2 * rep.grad_b_l2;
  if (!(denom > 0.0)) throw DomainError("Wente ratio undefined: grad a or grad b vanishes on the ball");

  std::vector<double> f(g.node_count(), 0.0);
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (!mask[k]) continue;
    const auto da = ga.at_channel(k, 0);
    const auto db = gb.at_channel(k, 0);
    f[k] = da[0] * db[0] + da[1] * db[1];
  }
  const std::vector<double> zero(g.node_count(), 0.0);
  double fmax = 0.0;
  for (double x : f) fmax = std::max(fmax, std::abs(x));
  const PoissonResult w = solve_poisson(g, Stencil::five_point, mask, f, zero, tol * std::max(fmax, 1e-300));
  for (std::size_t k = 0; k < g.node_count(); ++k) rep.w_sup = std::max(rep.w_sup, std::abs(w.u[k]));
  rep.grad_w_l2 = std::sqrt(edge_dirichlet(g, w.u));
  rep.ratio = (rep.w_sup + rep.grad_w_l2) / denom;
  return rep;
}

ViscosityReport viscosity_report(const ScalarField& lambda, const VectorField& v, double contact_tol,
                                 double radius) {
  require_same_grid(lambda.grid(), v.grid());
  const DiskGrid& g = lambda.grid();
  const ScalarField lap = laplacian(lambda);
  const ScalarField ge = weight_field(v);
  const ScalarField gc = centered_gradient_energy_density(v);
  ViscosityReport rep;
  rep.min_discrete_laplacian = std::numeric_limits<double>::infinity();
  rep.max_discrete_laplacian = -std::numeric_limits<double>::infinity();
  const double r2 = radius * radius;
  for (std::size_t k : g.interior_nodes()) {
    rep.min_discrete_laplacian = std::min(rep.min_discrete_laplacian, lap[k]);
    rep.max_discrete_laplacian = std::max(rep.max_discrete_laplacian, lap[k]);
    rep.lambda_bound = std::max(rep.lambda_bound, lambda[k] * ge[k]);
    const bool inside = g.x(k) * g.x(k) + g.y(k) * g.y(k) < r2;
    if (inside && lambda[k] > 1.0 + contact_tol && gc.defined(k)) {
      ++rep.off_contact_nodes;
      rep.off_contact_eq_residual = std::max(rep.off_contact_eq_residual, std::abs(lap[k] - lambda[k] * gc[k]));
    }
  }
  return rep;
}

ScalarField smooth_cutoff(GridPtr grid, Point center, double r_in, double r_out) {
  if (!(r_in >= 0.0 && r_out > r_in)) throw DomainError("cutoff needs 0 <= r_in < r_out");
  auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  return ScalarField::from_function(std::move(grid), [=](double x, double y) {
    const double r = std::hypot(x - center.x, y - center.y);
    const double t = (r_out - r) / (r_out - r_in);
    return psi(t) / (psi(t) + psi(1.0 - t));
  });
}

std::vector<double> difference_quotient_energy(const ScalarField& mu, const ScalarField& eta,
                                               const std::vector<int>& steps, int direction) {
  require_same_grid(mu.grid(), eta.grid());
  if (direction != 0 && direction != 1) throw DomainError("direction must be 0 (x) or 1 (y)");
  const DiskGrid& g = mu.grid();
  const int n = g.n();
  std::vector<double> f(g.node_count(), 0.0);
  for (std::size_t k : g.active_nodes()) f[k] = eta[k] * mu[k];

  std::vector<double> out;
  for (int step : steps) {
    if (step <= 0) throw DomainError("difference-quotient steps must be positive");
    const double kh = step * g.h();
    std::vector<double> d(g.node_count(), 0.0);
    for (std::size_t k : g.active_nodes()) {
      const int i = g.col(k) + (direction == 0 ? step : 0);
      const int j = g.row(k) + (direction == 1 ? step : 0);
      const bool inside = i < n && j < n && g.active(g.index(i, j));
      if (!inside) {
        if (eta[k] != 0.0) throw DomainError("difference-quotient shift leaves the disk");
        continue;
      }
      d[k] = (f[g.index(i, j)] - f[k]) / kh;
    }
    const CovectorField grad = gradient(ScalarField(mu.grid_ptr(), std::move(d)));
    out.push_back(l2_norm(grad));
  }
  return out;
}

double holder_seminorm(const NodeField& F, double alpha, std::size_t sample_budget) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("Hoelder exponent must lie in (0, 1]");
  if (sample_budget == 0) throw DomainError("sample budget must be positive");
  const DiskGrid& g = F.grid();
  const int n = g.n();
  std::vector<std::size_t> base;
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (F.defined(k)) base.push_back(k);
  }
  std::vector<int> offsets;
  for (int d = 1; d < n; d *= 2) offsets.push_back(d);
  constexpr int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  const std::size_t per_base = offsets.size() * 4;
  const std::size_t stride = std::max<std::size_t>(1, (base.size() * per_base + sample_budget - 1) / sample_budget);

  double worst = 0.0;
  for (std::size_t idx = 0; idx < base.size(); idx += stride) {
    const std::size_t k = base[idx];
    for (const auto& dir : dirs) {
      for (int d : offsets) {
        const int i = g.col(k) + d * dir[0];
        const int j = g.row(k) + d * dir[1];
        if (i < 0 || j < 0 || i >= n || j >= n) continue;
        const std::size_t m = g.index(i, j);
        if (!F.defined(m)) continue;
        double diff = 0.0;
        for (int c = 0; c < F.width(); ++c) {
          const double e = F.value(k, c) - F.value(m, c);
          diff += e * e;
        }
        const double dist = g.h() * d * std::hypot(dir[0], dir[1]);
        worst = std::max(worst, std::sqrt(diff) / std::pow(dist, alpha));
      }
    }
  }
  return worst;
}

double Polyline::length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    len += std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
  }
  if (closed && points.size() > 1) {
    len += std::hypot(points.front().x - points.back().x, points.front().y - points.back().y);
  }
  return len;
}

double Polyline::area() const {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    const Point& q = points[(i + 1) % points.size()];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(s);
}

double Polyline::circularity() const {
  const double p = length();
  return p > 0.0 ? 4.0 * std::numbers::pi * area() / (p * p) : 0.0;
}

std::vector<Polyline> level_set(const ScalarField& lambda, double level) {
  const DiskGrid& g = lambda.grid();
  const int n = g.n();
  // Edge ids: 2 * node for the edge to the right neighbour, 2 * node + 1 upward.
  std::map<std::size_t, Point> crossing;
  std::vector<std::pair<std::size_t, std::size_t>> segments;
  auto edge_point = [&](std::size_t id) {
    auto it = crossing.find(id);
    if (it != crossing.end()) return;
    const std::size_t a = id / 2;
    const std::size_t b = id % 2 == 0 ? a + 1 : a + static_cast<std::size_t>(n);
    const double fa = lambda[a] - level, fb = lambda[b] - level;
    const double t = fa / (fa - fb);
    crossing[id] = Point{g.x(a) + t * (g.x(b) - g.x(a)), g.y(a) + t * (g.y(b) - g.y(a))};
  };
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      const std::size_t c0 = g.index(i, j), c1 = g.index(i + 1, j);
      const std::size_t c2 = g.index(i + 1, j + 1), c3 = g.index(i, j + 1);
      if (!g.active(c0) || !g.active(c1) || !g.active(c2) || !g.active(c3)) continue;
      const bool s0 = lambda[c0] > level, s1 = lambda[c1] > level;
      const bool s2 = lambda[c2] > level, s3 = lambda[c3] > level;
      // Cell edges in counter-clockwise order: bottom, right, top, left.
      const std::size_t e[4] = {2 * c0, 2 * c1 + 1, 2 * c3, 2 * c0 + 1};
      const bool cut[4] = {s0 != s1, s1 != s2, s3 != s2, s0 != s3};
      std::vector<std::size_t> hits;
      for (int q = 0; q < 4; ++q) {
        if (cut[q]) {
          edge_point(e[q]);
          hits.push_back(e[q]);
        }
      }
      if (hits.size() == 2) {
        segments.emplace_back(hits[0], hits[1]);
      } else if (hits.size() == 4) {
        // Saddle: the centre value decides which corners connect.
        const double centre = 0.25 * (lambda[c0] + lambda[c1] + lambda[c2] + lambda[c3]);
        if ((centre > level) == s0) {
          segments.emplace_back(e[0], e[1]);
          segments.emplace_back(e[2], e[3]);
        } else {
          segments.emplace_back(e[0], e[3]);
          segments.emplace_back(e[1], e[2]);
        }
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].first].push_back(s);
    incident[segments[s].second].push_back(s);
  }
  std::vector<std::uint8_t> used(segments.size(), 0);
  auto trace = [&](std::size_t seg, std::size_t start) {
    Polyline line;
    line.points.push_back(crossing[start]);
    std::size_t at = start;
    while (true) {
      used[seg] = 1;
      const std::size_t next = segments[seg].first == at ? segments[seg].second : segments[seg].first;
      if (next == start) {
        line.closed = true;
        break;
      }
      line.points.push_back(crossing[next]);
      at = next;
      std::size_t follow = segments.size();
      for (std::size_t cand : incident[at]) {
        if (!used[cand]) follow = cand;
      }
      if (follow == segments.size()) break;
      seg = follow;
    }
    return line;
  };
  std::vector<Polyline> out;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (std::size_t end : {segments[s].first, segments[s].second}) {
      if (incident[end].size() == 1) {
        out.push_back(trace(s, end));
        break;
      }
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) out.push_back(trace(s, segments[s].first));
  }
  return out;
}

std::vector<Polyline> free_boundary(const ScalarField& lambda, double contact_tol) {
  return level_set(lambda, 1.0 + contact_tol);
}

double contact_radius(const ScalarField& lambda, double threshold) {
  const DiskGrid& g = lambda.grid();
  std::size_t count = 0;
  for (std::size_t k : g.interior_nodes()) {
    if (lambda[k] <= 1.0 + threshold) ++count;
  }
  return std::sqrt(static_cast<double>(count) * g.h() * g.h() / std::numbers::pi);
}

}  // namespace geobs
