#include "geobs/rotation.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <string>

#include "geobs/field_io.hpp"
#include "geobs/calculus.hpp"
#include "geobs/poisson.hpp"
#include "tangent_descent.hpp"

namespace geobs {
namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, 4, 4>;
using ConstMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using MutMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

void check_dim(int dim) {
  if (dim < 2 || dim > RotationField::kMaxDim) {
    throw DomainError("rotation dimension must lie in [2, 4], got " + std::to_string(dim));
  }
}

double node_defect(int dim, const double* p) {
  const ConstMap P(p, dim, dim);
  return (P.transpose() * P - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

struct RotationProjector {
  int dim;
  // X <- P skew(P^T X)
  void operator()(const double* base, double* vec) const {
    const ConstMap P(base, dim, dim);
    MutMap X(vec, dim, dim);
    const Mat A = P.transpose() * X;
    X = P * (0.5 * (A - A.transpose()));
  }
};

struct RotationRetraction {
  int dim;
  double* drift;
  void operator()(const double* base, const double* dir, double s, double* out) const {
    const ConstMap P(base, dim, dim);
    const ConstMap X(dir, dim, dim);
    Mat A = P.transpose() * X;
    A = 0.5 * (A - A.transpose());
    const Mat E = (s * A).exp();
    MutMap(out, dim, dim) = P * E;
    *drift = std::max(*drift, node_defect(dim, out));
  }
};

std::vector<double> squared(const ScalarField& lambda) {
  std::vector<double> w(lambda.values());
  for (double& x : w) x *= x;
  return w;
}

}  // namespace

double orthogonality_defect(int dim, std::span<const double> values,
                            std::span<const std::size_t> nodes) {
  double worst = 0.0;
  const std::size_t w = static_cast<std::size_t>(dim) * dim;
  for (std::size_t k : nodes) worst = std::max(worst, node_defect(dim, &values[k * w]));
  return worst;
}

double project_to_rotation(int dim, std::span<const double> m, std::span<double> out) {
  check_dim(dim);
  const Mat M = ConstMap(m.data(), dim, dim);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat U = svd.matrixU();
  const Mat V = svd.matrixV();
  if ((U * V.transpose()).determinant() < 0.0) U.col(dim - 1) *= -1.0;
  MutMap(out.data(), dim, dim) = U * V.transpose();
  return svd.singularValues()(dim - 1);
}

void matrix_exponential(int dim, std::span<const double> a, std::span<double> out) {
  const Mat A = ConstMap(a.data(), dim, dim);
  MutMap(out.data(), dim, dim) = A.exp();
}

RotationField::RotationField(GridPtr grid, int dim, std::vector<double> values)
    : VectorField(std::move(grid), dim * dim, std::move(values)), dim_(dim) {
  check_dim(dim);
  for (std::size_t k : grid_->active_nodes()) {
    const double* p = &values_[k * static_cast<std::size_t>(width_)];
    if (node_defect(dim, p) > kOrthogonalityTol) {
      throw DomainError("matrix at node " + std::to_string(k) + " is not orthogonal");
    }
    if (ConstMap(p, dim, dim).determinant() <= 0.0) {
      throw DomainError("matrix at node " + std::to_string(k) + " has non-positive determinant");
    }
  }
}

double RotationField::orthogonality_defect() const {
  return geobs::orthogonality_defect(dim_, values_, grid_->active_nodes());
}

RotationField RotationField::identity(GridPtr grid, int dim) {
  check_dim(dim);
  return RotationField::from_generator(std::move(grid), dim, [](double, double, std::span<double>) {});
}

RotationField RotationField::from_angle(GridPtr grid, const std::function<double(double, double)>& theta) {
  VectorField f = VectorField::from_function(grid, 4, [&](double x, double y, std::span<double> o) {
    const double t = theta(x, y);
    o[0] = std::cos(t);
    o[1] = -std::sin(t);
    o[2] = std::sin(t);
    o[3] = std::cos(t);
  });
  return RotationField(std::move(grid), 2, f.values());
}

RotationField RotationField::from_generator(
    GridPtr grid, int dim, const std::function<void(double, double, std::span<double>)>& upper) {
  check_dim(dim);
  const int pairs = dim * (dim - 1) / 2;
  VectorField f = VectorField::from_function(grid, dim * dim, [&](double x, double y, std::span<double> o) {
    std::vector<double> u(static_cast<std::size_t>(pairs), 0.0);
    upper(x, y, u);
    Mat A = Mat::Zero(dim, dim);
    int p = 0;
    for (int i = 0; i < dim; ++i) {
      for (int j = i + 1; j < dim; ++j, ++p) {
        A(i, j) = u[p];
        A(j, i) = -u[p];
      }
    }
    MutMap(o.data(), dim, dim) = A.exp();
  });
  return RotationField(std::move(grid), dim, f.values());
}

RotationField RotationField::harmonic_initialization(const VectorField& entries, int dim) {
  check_dim(dim);
  if (entries.channels() != dim * dim) throw DomainError("entry field must have N^2 channels");
  const DiskGrid& g = entries.grid();
  const std::size_t w = static_cast<std::size_t>(dim) * dim;
  for (std::size_t k : g.boundary_nodes()) {
    const double* p = &entries.values()[k * w];
    if (node_defect(dim, p) > kOrthogonalityTol || ConstMap(p, dim, dim).determinant() <= 0.0) {
      throw DomainError("boundary matrix at node " + std::to_string(k) + " is not a rotation");
    }
  }
  std::vector<double> ext = harmonic_extension(g, dim * dim, entries.values());
  std::vector<std::uint8_t> assigned(g.node_count(), 0);
  for (std::size_t k : g.boundary_nodes()) assigned[k] = 1;
  std::vector<std::size_t> degenerate;
  std::vector<double> r(w);
  for (std::size_t k : g.interior_nodes()) {
    const double smin = project_to_rotation(dim, std::span<const double>(&ext[k * w], w), r);
    std::copy(r.begin(), r.end(), ext.begin() + static_cast<std::ptrdiff_t>(k * w));
    if (smin < 0.1) {
      degenerate.push_back(k);
    } else {
      assigned[k] = 1;
    }
  }
  const std::size_t n = static_cast<std::size_t>(g.n());
  bool progress = !degenerate.empty();
  while (progress) {
    progress = false;
    std::vector<std::pair<std::size_t, std::size_t>> layer;
    for (std::size_t k : degenerate) {
      if (assigned[k]) continue;
      for (std::size_t nb : {k + 1, k - 1, k + n, k - n}) {
        if (assigned[nb]) {
          layer.emplace_back(k, nb);
          break;
        }
      }
    }
    for (auto [k, nb] : layer) {
      std::copy_n(ext.begin() + static_cast<std::ptrdiff_t>(nb * w), w,
                  ext.begin() + static_cast<std::ptrdiff_t>(k * w));
      assigned[k] = 1;
      progress = true;
    }
  }
  return RotationField(entries.grid_ptr(), dim, std::move(ext));
}

RotationSolution solve_rotation(const ObstacleField& lambda, const RotationField& boundary,
                                const RotationField& init, const RotationSolveConfig& cfg) {
  cfg.validate();
  require_same_grid(lambda.grid(), boundary.grid());
  require_same_grid(lambda.grid(), init.grid());
  if (boundary.dim() != init.dim()) throw DomainError("boundary and init dimensions differ");
  const DiskGrid& g = lambda.grid();
  const int dim = init.dim();
  const std::size_t w = static_cast<std::size_t>(dim) * dim;

  std::vector<double> x(init.values());
  for (std::size_t k : g.boundary_nodes()) {
    std::copy_n(boundary.values().begin() + static_cast<std::ptrdiff_t>(k * w), w,
                x.begin() + static_cast<std::ptrdiff_t>(k * w));
  }
  const std::vector<double> weight = squared(lambda);
  detail::DescentSettings s;
  s.max_iters = cfg.max_iters;
  s.tol = cfg.tol;
  s.step = cfg.step;
  s.backtrack = cfg.backtracking;
  s.cg_rel_tol = cfg.cg_rel_tol;
  s.cg_max_iters = cfg.cg_max_iters;
  double drift = orthogonality_defect(dim, x, g.active_nodes());
  detail::DescentResult r = detail::tangent_descent(g, weight, static_cast<int>(w), std::move(x),
                                                    RotationProjector{dim},
                                                    RotationRetraction{dim, &drift}, s);
  std::vector<ResidualRecord> history;
  history.reserve(r.history.size());
  for (const auto& h : r.history) history.push_back({h.iter, h.energy, h.residual});
  if (!r.converged) {
    throw RotationNonConvergence("rotation solve stopped at residual " + format_double(r.residual) +
                                     " after " + std::to_string(r.iterations) +
                                     " steps: " + r.failure,
                                 std::move(history));
  }
  return RotationSolution{RotationField(lambda.grid_ptr(), dim, std::move(r.x)), std::move(history),
                          r.iterations, r.cg_iterations, r.residual, drift};
}

RotationSolution solve_rotation(const ObstacleField& lambda, const RotationField& boundary,
                                const RotationSolveConfig& cfg) {
  return solve_rotation(lambda, boundary,
                        RotationField::harmonic_initialization(boundary, boundary.dim()), cfg);
}

double rotation_tangential_residual(const ScalarField& lambda, const RotationField& P) {
  require_same_grid(lambda.grid(), P.grid());
  const std::vector<double> weight = squared(lambda);
  detail::EdgeWeights ew(P.grid(), weight);
  std::vector<double> t;
  RotationProjector proj{P.dim()};
  return detail::tangential_forcing(P.grid(), ew, P.dim() * P.dim(), P.values(), proj, t);
}

namespace {

// P^T d_x P and P^T d_y P as an N^2-channel covector field.
CovectorField maurer_cartan(const RotationField& P) {
  const int dim = P.dim();
  const int w = dim * dim;
  const CovectorField grad = gradient(P);
  const DiskGrid& g = P.grid();
  std::vector<double> out(g.node_count() * 2 * static_cast<std::size_t>(w), 0.0);
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (!grad.defined(k)) continue;
    const ConstMap Pk(&P.values()[k * w], dim, dim);
    for (int d = 0; d < 2; ++d) {
      Mat D(dim, dim);
      for (int e = 0; e < w; ++e) D(e / dim, e % dim) = grad.at_channel(k, e)[d];
      const Mat M = Pk.transpose() * D;
      for (int e = 0; e < w; ++e) out[k * 2 * w + 2 * e + d] = M(e / dim, e % dim);
    }
  }
  return CovectorField(P.grid_ptr(), w, std::move(out), grad.support());
}

}  // namespace

double rotation_conservation_residual(const ScalarField& lambda, const RotationField& P, double radius) {
  require_same_grid(lambda.grid(), P.grid());
  std::vector<double> w2 = squared(lambda);
  ScalarField lam2(lambda.grid_ptr(), std::move(w2), lambda.support());
  // The symmetric part of P^T grad P vanishes only in the continuum; it is
  // measured separately by rotation_symmetry_defect().
  const CovectorField mc = maurer_cartan(P);
  const int dim = P.dim();
  std::vector<double> skew(mc.values().size(), 0.0);
  const std::size_t stride = 2 * static_cast<std::size_t>(dim) * dim;
  for (std::size_t k = 0; k < P.grid().node_count(); ++k) {
    if (!mc.defined(k)) continue;
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        for (int d = 0; d < 2; ++d) {
          skew[k * stride + 2 * (i * dim + j) + d] =
              0.5 * (mc.at_channel(k, i * dim + j)[d] - mc.at_channel(k, j * dim + i)[d]);
        }
      }
    }
  }
  const CovectorField A(P.grid_ptr(), dim * dim, std::move(skew), mc.support());
  const VectorField div = divergence(scale(A, lam2));
  const DiskGrid& g = P.grid();
  const double h2 = g.h() * g.h();
  const double r2 = radius * radius;
  double worst = 0.0;
  for (int e = 0; e < div.channels(); ++e) {
    double acc = 0.0;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      if (div.defined(k) && g.x(k) * g.x(k) + g.y(k) * g.y(k) < r2) acc += div.value(k, e) * div.value(k, e);
    }
    worst = std::max(worst, std::sqrt(acc * h2));
  }
  return worst;
}

double rotation_symmetry_defect(const RotationField& P) {
  const int dim = P.dim();
  const CovectorField mc = maurer_cartan(P);
  double worst = 0.0;
  for (std::size_t k = 0; k < P.grid().node_count(); ++k) {
    if (!mc.defined(k)) continue;
    double s = 0.0;
    for (int d = 0; d < 2; ++d) {
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          const double sym = 0.5 * (mc.at_channel(k, i * dim + j)[d] + mc.at_channel(k, j * dim + i)[d]);
          s += sym * sym;
        }
      }
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

}  // namespace geobs
