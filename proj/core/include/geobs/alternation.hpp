#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "geobs/errors.hpp"
#include "geobs/obstacle.hpp"
#include "geobs/sphere_map.hpp"

namespace geobs {

struct CriticalConfig {
  int max_outer = 200;
  /// Stop once an outer cycle lowers E by less than this fraction...
  double energy_rtol = 1e-10;
  /// ...and both the KKT complementarity of lambda and the tangential
  /// residual of v are below this bound.
  double joint_tol = 1e-6;
  /// Negative selects the default 10 h^2.
  double contact_tol = -1.0;
  ObstacleSolveConfig obstacle;
  SphereSolveConfig sphere;

  void validate() const;
};

/// E(lambda, v) after a half-step. `half` is "init", "v" or "lambda".
struct EnergyRecord {
  int outer = 0;
  std::string half;
  double e_lambda = 0.0;
  double e_v = 0.0;
  double total() const { return e_lambda + e_v; }
  double min_modulus = 0.0;  ///< min |lambda v| over active nodes
};

struct JointReport {
  KKTReport kkt;
  ElResiduals el;
  double tangential_residual = 0.0;
  int outer_iterations = 0;
  int obstacle_sweeps = 0;  ///< summed over all lambda half-steps
  int sphere_iterations = 0;
};

struct CriticalPoint {
  ObstacleField lambda;
  SphereField v;
  std::vector<EnergyRecord> energy_trace;
  JointReport joint_report;
  bool converged = false;
};

/// A half-step solver failed. Carries the state reached before the failing
/// half-step (energy trace included) so callers can still export it.
class CriticalNonConvergence : public NonConvergence {
 public:
  CriticalNonConvergence(const std::string& what, std::shared_ptr<const CriticalPoint> partial)
      : NonConvergence(what), partial_(std::move(partial)) {}
  const CriticalPoint& partial() const { return *partial_; }

 private:
  std::shared_ptr<const CriticalPoint> partial_;
};

/// Alternates v- and lambda-half-steps from the splitting of `boundary_u`
/// (lambda_b = |u_b|, v_b = u_b / |u_b| on boundary nodes). lambda starts at
/// the harmonic extension of lambda_b, v at harmonic_initialization(v_b).
/// Every outer cycle recomputes g = |grad v|^2 from scratch.
///
/// Throws DomainError if |u_b| < 1 somewhere on the boundary and
/// CriticalNonConvergence when a half-step solver fails. Exhausting
/// cfg.max_outer is not an error: the result has converged == false.
CriticalPoint solve_critical(const VectorField& boundary_u, const CriticalConfig& cfg);

/// Continues the outer loop of `cp` for up to `extra` cycles. The loop
/// depends only on (lambda, v, energy_trace), so solving with k cycles and
/// resuming for m more gives the same result as solving with k + m.
CriticalPoint resume(const CriticalPoint& cp, int extra, const CriticalConfig& cfg);

/// Joint report of an arbitrary pair, with no iteration counts.
JointReport joint_report(const ObstacleField& lambda, const SphereField& v, double contact_tol);

/// Checkpoint directory: lambda.{csv,json}, v.{csv,json}, trace.json.
inline constexpr int kCheckpointVersion = 1;
void write_checkpoint(const std::filesystem::path& dir, const CriticalPoint& cp);
/// Throws FormatError for malformed or mismatching files, GridMismatch when
/// `grid` is given and the stored resolution differs.
CriticalPoint read_checkpoint(const std::filesystem::path& dir, GridPtr grid = nullptr);

}  // namespace geobs
