#include "geobs/alternation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "geobs/energy.hpp"
#include "geobs/field_io.hpp"
#include "geobs/poisson.hpp"

namespace geobs {
namespace {

using nlohmann::json;

EnergyRecord record(int outer, const char* half, const ObstacleField& lambda, const SphereField& v) {
  const SplitEnergy e = split_energy(lambda, v);
  double min_mod = std::numeric_limits<double>::infinity();
  for (std::size_t k : lambda.grid().active_nodes()) min_mod = std::min(min_mod, lambda[k]);
  return EnergyRecord{outer, half, e.e_lambda, e.e_v, min_mod};
}

double resolve_contact_tol(const CriticalConfig& cfg, const DiskGrid& g) {
  return cfg.contact_tol < 0.0 ? default_contact_tol(g) : cfg.contact_tol;
}

std::string context(int outer, const char* half, const std::exception& e) {
  return std::string("outer iteration ") + std::to_string(outer) + ", " + half +
         " half-step: " + e.what();
}

bool residuals_ok(const JointReport& r, double tol) {
  return r.kkt.max_complementarity <= tol && r.tangential_residual <= tol;
}

CriticalPoint run_outer(CriticalPoint cp, int extra, const CriticalConfig& cfg) {
  const double ctol = resolve_contact_tol(cfg, cp.lambda.grid());
  const int first = cp.joint_report.outer_iterations + 1;
  for (int outer = first; outer < first + extra; ++outer) {
    const double previous = cp.energy_trace.back().total();
    try {
      SphereSolution s = solve_sphere(cp.lambda, cp.v, cp.v, cfg.sphere);
      cp.joint_report.sphere_iterations += s.iterations;
      cp.v = std::move(s.v);
    } catch (const NonConvergence& e) {
      throw CriticalNonConvergence(context(outer, "v", e), std::make_shared<CriticalPoint>(cp));
    }
    cp.energy_trace.push_back(record(outer, "v", cp.lambda, cp.v));

    const ScalarField g = weight_field(cp.v);
    try {
      ObstacleSolution o = solve_obstacle(g, cp.lambda, cfg.obstacle);
      cp.joint_report.obstacle_sweeps += o.sweeps;
      cp.lambda = std::move(o.lambda);
    } catch (const NonConvergence& e) {
      throw CriticalNonConvergence(context(outer, "lambda", e), std::make_shared<CriticalPoint>(cp));
    }
    cp.energy_trace.push_back(record(outer, "lambda", cp.lambda, cp.v));
    cp.joint_report.outer_iterations = outer;

    const JointReport r = joint_report(cp.lambda, cp.v, ctol);
    cp.joint_report.kkt = r.kkt;
    cp.joint_report.el = r.el;
    cp.joint_report.tangential_residual = r.tangential_residual;

    const double current = cp.energy_trace.back().total();
    const double decrease = (previous - current) / std::max(current, 1e-300);
    cp.converged = decrease < cfg.energy_rtol && residuals_ok(r, cfg.joint_tol);
    if (cp.converged) break;
  }
  return cp;
}

json report_json(const JointReport& r) {
  return json{{"kkt",
               {{"max_negativity", r.kkt.max_negativity},
                {"max_complementarity", r.kkt.max_complementarity},
                {"max_interior_residual", r.kkt.max_interior_residual},
                {"contact_fraction", r.kkt.contact_fraction},
                {"contact_tol", r.kkt.contact_tol}}},
              {"el",
               {{"r_direct", r.el.r_direct},
                {"r_antisym", r.el.r_antisym},
                {"r_conservation", r.el.r_conservation}}},
              {"tangential_residual", r.tangential_residual},
              {"outer_iterations", r.outer_iterations},
              {"obstacle_sweeps", r.obstacle_sweeps},
              {"sphere_iterations", r.sphere_iterations}};
}

JointReport report_from_json(const json& j) {
  JointReport r;
  const json& k = j.at("kkt");
  r.kkt.max_negativity = k.at("max_negativity").get<double>();
  r.kkt.max_complementarity = k.at("max_complementarity").get<double>();
  r.kkt.max_interior_residual = k.at("max_interior_residual").get<double>();
  r.kkt.contact_fraction = k.at("contact_fraction").get<double>();
  r.kkt.contact_tol = k.at("contact_tol").get<double>();
  const json& el = j.at("el");
  r.el.r_direct = el.at("r_direct").get<double>();
  r.el.r_antisym = el.at("r_antisym").get<double>();
  r.el.r_conservation = el.at("r_conservation").get<double>();
  r.tangential_residual = j.at("tangential_residual").get<double>();
  r.outer_iterations = j.at("outer_iterations").get<int>();
  r.obstacle_sweeps = j.at("obstacle_sweeps").get<int>();
  r.sphere_iterations = j.at("sphere_iterations").get<int>();
  return r;
}

}  // namespace

void CriticalConfig::validate() const {
  if (max_outer < 0) throw DomainError("max_outer must be non-negative");
  if (!(energy_rtol > 0.0) || !(joint_tol > 0.0)) throw DomainError("tolerances must be positive");
  obstacle.validate();
  sphere.validate();
}

JointReport joint_report(const ObstacleField& lambda, const SphereField& v, double contact_tol) {
  JointReport r;
  r.kkt = kkt_report(lambda, weight_field(v), contact_tol);
  r.el = el_residuals(lambda, v);
  r.tangential_residual = tangential_residual(lambda, v);
  return r;
}

CriticalPoint solve_critical(const VectorField& boundary_u, const CriticalConfig& cfg) {
  cfg.validate();
  const DiskGrid& g = boundary_u.grid();
  const int dim = boundary_u.channels();
  if (dim < 2) throw DomainError("target dimension must be at least 2");
  std::vector<double> lam_b(g.node_count(), 1.0);
  std::vector<double> v_b(g.node_count() * static_cast<std::size_t>(dim), 0.0);
  for (std::size_t k : g.boundary_nodes()) {
    const double m = boundary_u.node_norm(k);
    if (m < 1.0 - ObstacleField::kSlack) {
      throw DomainError("boundary value at node " + std::to_string(k) + " lies inside the unit ball");
    }
    lam_b[k] = std::max(m, 1.0);
    for (int c = 0; c < dim; ++c) v_b[k * dim + c] = boundary_u.value(k, c) / m;
  }
  std::vector<double> lam0 = harmonic_extension(g, 1, lam_b);
  for (std::size_t k : g.active_nodes()) lam0[k] = std::max(lam0[k], 1.0);
  ObstacleField lambda(boundary_u.grid_ptr(), std::move(lam0));
  VectorField vb(boundary_u.grid_ptr(), dim, std::move(v_b));
  SphereField v = harmonic_initialization(vb);

  CriticalPoint cp{std::move(lambda), std::move(v), {}, {}, false};
  cp.energy_trace.push_back(record(0, "init", cp.lambda, cp.v));
  const JointReport r = joint_report(cp.lambda, cp.v, resolve_contact_tol(cfg, g));
  cp.joint_report.kkt = r.kkt;
  cp.joint_report.el = r.el;
  cp.joint_report.tangential_residual = r.tangential_residual;
  return run_outer(std::move(cp), cfg.max_outer, cfg);
}

CriticalPoint resume(const CriticalPoint& cp, int extra, const CriticalConfig& cfg) {
  cfg.validate();
  if (extra < 0) throw DomainError("extra iterations must be non-negative");
  require_same_grid(cp.lambda.grid(), cp.v.grid());
  if (cp.energy_trace.empty()) throw DomainError("critical point has an empty energy trace");
  return run_outer(cp, extra, cfg);
}

void write_checkpoint(const std::filesystem::path& dir, const CriticalPoint& cp) {
  std::filesystem::create_directories(dir);
  write_field(dir / "lambda", cp.lambda, "lambda");
  write_field(dir / "v", cp.v, "v");
  json trace = json::array();
  for (const EnergyRecord& e : cp.energy_trace) {
    trace.push_back({{"outer", e.outer},
                     {"half", e.half},
                     {"e_lambda", e.e_lambda},
                     {"e_v", e.e_v},
                     {"total", e.total()},
                     {"min_modulus", e.min_modulus}});
  }
  const json doc{{"format", "geobs-checkpoint"},
                 {"version", kCheckpointVersion},
                 {"n", cp.lambda.grid().n()},
                 {"dim", cp.v.dim()},
                 {"converged", cp.converged},
                 {"energy_trace", trace},
                 {"joint_report", report_json(cp.joint_report)}};
  std::ofstream out(dir / "trace.json");
  out << doc.dump(2) << '\n';
  if (!out) throw FormatError("cannot write " + (dir / "trace.json").string());
}

CriticalPoint read_checkpoint(const std::filesystem::path& dir, GridPtr grid) {
  std::ifstream in(dir / "trace.json");
  if (!in) throw FormatError("missing " + (dir / "trace.json").string());
  json doc;
  try {
    doc = json::parse(in);
    if (doc.at("format") != "geobs-checkpoint") throw FormatError("not a geobs checkpoint");
    if (doc.at("version").get<int>() != kCheckpointVersion) {
      throw FormatError("unsupported checkpoint version " + doc.at("version").dump());
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed trace.json: ") + e.what());
  }
  LoadedField lam = read_field(dir / "lambda", grid);
  LoadedField v = read_field(dir / "v", lam.grid);
  try {
    if (doc.at("n").get<int>() != lam.grid->n()) throw FormatError("trace resolution differs from fields");
    if (lam.width != 1 || v.width != doc.at("dim").get<int>()) throw FormatError("channel count mismatch");
    CriticalPoint cp{ObstacleField(lam.grid, std::move(lam.values)),
                     SphereField(lam.grid, v.width, std::move(v.values)),
                     {},
                     report_from_json(doc.at("joint_report")),
                     doc.at("converged").get<bool>()};
    for (const json& e : doc.at("energy_trace")) {
      cp.energy_trace.push_back(EnergyRecord{e.at("outer").get<int>(), e.at("half").get<std::string>(),
                                             e.at("e_lambda").get<double>(), e.at("e_v").get<double>(),
                                             e.at("min_modulus").get<double>()});
    }
    if (cp.energy_trace.empty()) throw FormatError("checkpoint has an empty energy trace");
    return cp;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed trace.json: ") + e.what());
  }
}

}  // namespace geobs
