#pragma once

// Energy descent for maps into a submanifold of R^W at fixed weight lambda^2.
//
// Each step minimizes the quadratic energy sum_edges c_ab |x_a + w_a - x_b - w_b|^2
// over tangent fields w (w_a in T_{x_a}, w = 0 on boundary nodes) by
// preconditioned CG, retracts x + s w back onto the manifold and backtracks on
// s until the energy does not increase (up to rounding, see below). The projected system is P K P w = P R
// with (K w)_a = sum_b c_ab (w_a - w_b) and R_a = sum_b c_ab (x_b - x_a), i.e.
// R = h^2 div_h(lambda^2 grad x).

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "geobs/disk_grid.hpp"
#include "geobs/linalg.hpp"

namespace geobs::detail {

struct DescentSettings {
  int max_iters = 500;
  double tol = 1e-8;
  double step = 1.0;
  double backtrack = 0.5;
  double min_step = 1e-10;
  double cg_rel_tol = 1e-5;
  int cg_max_iters = 20000;
};

struct DescentStep {
  int iter = 0;
  double energy = 0.0;
  double residual = 0.0;
};

struct DescentResult {
  std::vector<double> x;
  std::vector<DescentStep> history;
  bool converged = false;
  int iterations = 0;
  int cg_iterations = 0;
  double residual = 0.0;
  std::string failure;
};

class EdgeWeights {
 public:
  EdgeWeights(const DiskGrid& g, std::span<const double> node_weight) : g_(g), w_(node_weight) {
    const std::size_t n = static_cast<std::size_t>(g.n());
    offsets_[0] = 1;
    offsets_[1] = -1;
    offsets_[2] = static_cast<std::ptrdiff_t>(n);
    offsets_[3] = -static_cast<std::ptrdiff_t>(n);
    c_.assign(g.node_count() * 4, 0.0);
    for (std::size_t a : g.interior_nodes()) {
      for (int e = 0; e < 4; ++e) c_[a * 4 + e] = 0.5 * (w_[a] + w_[neighbour(a, e)]);
    }
  }
  std::size_t neighbour(std::size_t a, int e) const {
    return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(a) + offsets_[e]);
  }
  double c(std::size_t a, int e) const { return c_[a * 4 + e]; }
  double node_weight(std::size_t a) const { return w_[a]; }

 private:
  const DiskGrid& g_;
  std::span<const double> w_;
  std::ptrdiff_t offsets_[4];
  std::vector<double> c_;
};

inline double edge_energy(const DiskGrid& g, std::span<const double> w, int W,
                          const std::vector<double>& x) {
  const std::size_t n = static_cast<std::size_t>(g.n());
  double e = 0.0;
  auto add = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    for (int c = 0; c < W; ++c) {
      const double d = x[a * W + c] - x[b * W + c];
      s += d * d;
    }
    e += 0.5 * (w[a] + w[b]) * s;
  };
  for (std::size_t a : g.active_nodes()) {
    if (g.active(a + 1)) add(a, a + 1);
    if (g.active(a + n)) add(a, a + n);
  }
  return e;
}

/// Tangential part of R at interior nodes (dense, zero elsewhere) and its
/// max node norm divided by h^2.
template <class Projector>
double tangential_forcing(const DiskGrid& g, const EdgeWeights& ew, int W,
                          const std::vector<double>& x, Projector& proj, std::vector<double>& t) {
  t.assign(x.size(), 0.0);
  double worst = 0.0;
  for (std::size_t a : g.interior_nodes()) {
    double* ta = &t[a * W];
    for (int e = 0; e < 4; ++e) {
      const std::size_t b = ew.neighbour(a, e);
      const double c = ew.c(a, e);
      for (int k = 0; k < W; ++k) ta[k] += c * (x[b * W + k] - x[a * W + k]);
    }
    proj(&x[a * W], ta);
    double s = 0.0;
    for (int k = 0; k < W; ++k) s += ta[k] * ta[k];
    worst = std::max(worst, std::sqrt(s));
  }
  return worst / (g.h() * g.h());
}

template <class Projector, class Retraction>
DescentResult tangent_descent(const DiskGrid& g, std::span<const double> node_weight, int W,
                              std::vector<double> x, Projector proj, Retraction retract,
                              const DescentSettings& s) {
  EdgeWeights ew(g, node_weight);
  DescentResult out;
  std::vector<double> t;
  double energy = edge_energy(g, node_weight, W, x);
  double res = tangential_forcing(g, ew, W, x, proj, t);
  out.history.push_back({0, energy, res});

  const auto interior = g.interior_nodes();
  auto apply = [&](std::span<const double> p, std::span<double> q) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t a : interior) {
      double* qa = &q[a * W];
      for (int e = 0; e < 4; ++e) {
        const std::size_t b = ew.neighbour(a, e);
        const double c = ew.c(a, e);
        for (int k = 0; k < W; ++k) qa[k] += c * (p[a * W + k] - p[b * W + k]);
      }
      proj(&x[a * W], qa);
    }
  };
  auto precondition = [&](std::span<const double> r, std::span<double> z) {
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t a : interior) {
      double d = 0.0;
      for (int e = 0; e < 4; ++e) d += ew.c(a, e);
      for (int k = 0; k < W; ++k) z[a * W + k] = r[a * W + k] / d;
    }
  };

  std::vector<double> w(x.size()), trial(x.size()), trial_t;
  for (int it = 1; it <= s.max_iters && res > s.tol; ++it) {
    std::fill(w.begin(), w.end(), 0.0);
    const CgResult cg = conjugate_gradient(apply, precondition, std::span<const double>(t),
                                           std::span<double>(w), s.cg_rel_tol, 0.0, s.cg_max_iters);
    out.cg_iterations += cg.iterations;
    double step = s.step;
    bool accepted = false;
    double trial_energy = energy;
    double trial_res = res;
    // Near convergence the energy change drops below rounding; a step that
    // keeps the energy within a few ulps is still taken if it lowers the residual.
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() * energy;
    while (step >= s.min_step) {
      trial = x;
      for (std::size_t a : interior) retract(&x[a * W], &w[a * W], step, &trial[a * W]);
      trial_energy = edge_energy(g, node_weight, W, trial);
      if (trial_energy <= energy + slack) {
        trial_res = tangential_forcing(g, ew, W, trial, proj, trial_t);
        if (trial_energy < energy || trial_res < res) {
          accepted = true;
          break;
        }
      }
      step *= s.backtrack;
    }
    out.iterations = it;
    if (!accepted) {
      out.failure = "line search found no energy decrease";
      break;
    }
    x.swap(trial);
    t.swap(trial_t);
    energy = trial_energy;
    res = trial_res;
    out.history.push_back({it, energy, res});
  }
  out.residual = res;
  out.converged = res <= s.tol;
  if (!out.converged && out.failure.empty()) out.failure = "iteration budget exhausted";
  out.x = std::move(x);
  return out;
}

}  // namespace geobs::detail
