#include "commands.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>

#include "geobs/alternation.hpp"
#include "geobs/analysis.hpp"
#include "geobs/energy.hpp"
#include "geobs/field_io.hpp"
#include "geobs/poisson.hpp"
#include "geobs/rotation.hpp"
#include "scenarios.hpp"

namespace geobs::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kManifestVersion = 1;

// Records every file written during a run so the manifest can list it.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }
  const fs::path& dir() const { return dir_; }

  void add(const fs::path& rel, std::string kind) { files_.emplace_back(rel, std::move(kind)); }

  void text(const fs::path& rel, const std::string& body, std::string kind) {
    fs::create_directories((dir_ / rel).parent_path());
    std::ofstream out(dir_ / rel, std::ios::binary);
    out << body;
    if (!out) throw FormatError("cannot write " + (dir_ / rel).string());
    add(rel, std::move(kind));
  }
  void json_file(const fs::path& rel, const json& doc, std::string kind) { text(rel, doc.dump(2) + "\n", std::move(kind)); }

  void field(const fs::path& rel_stem, const NodeField& f, const std::string& kind) {
    fs::create_directories((dir_ / rel_stem).parent_path());
    write_field(dir_ / rel_stem, f, kind);
    add(fs::path(rel_stem.string() + ".csv"), "field-csv");
    add(fs::path(rel_stem.string() + ".json"), "field-json");
  }

  void checkpoint(const fs::path& rel, const CriticalPoint& cp) {
    write_checkpoint(dir_ / rel, cp);
    for (const char* f : {"lambda.csv", "lambda.json", "v.csv", "v.json"}) add(rel / f, "checkpoint-field");
    add(rel / "trace.json", "checkpoint-trace");
  }

  void manifest(const std::string& command, const RunConfig& cfg, const std::string& status) {
    std::sort(files_.begin(), files_.end());
    files_.erase(std::unique(files_.begin(), files_.end(),
                             [](const auto& a, const auto& b) { return a.first == b.first; }),
                 files_.end());
    json list = json::array();
    for (const auto& [rel, kind] : files_) {
      list.push_back({{"path", rel.generic_string()},
                      {"kind", kind},
                      {"bytes", fs::file_size(dir_ / rel)},
                      {"sha256", sha256_file(dir_ / rel)}});
    }
    const json doc{{"format", "geobs-manifest"}, {"version", kManifestVersion}, {"command", command},
                   {"scenario", cfg.scenario},   {"status", status},            {"artifacts", list}};
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << doc.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  std::vector<std::pair<fs::path, std::string>> files_;
};

// A run whose contracts failed after its artifacts were written.
struct ContractFailure {
  std::string what;
  std::string status = "contract-failed";
};

json kkt_json(const KKTReport& r) {
  return {{"max_negativity", r.max_negativity},
          {"max_complementarity", r.max_complementarity},
          {"max_interior_residual", r.max_interior_residual},
          {"contact_fraction", r.contact_fraction},
          {"contact_tol", r.contact_tol}};
}

json el_json(const ElResiduals& r) {
  return {{"r_direct", r.r_direct}, {"r_antisym", r.r_antisym}, {"r_conservation", r.r_conservation}};
}

json viscosity_json(const ViscosityReport& r) {
  return {{"min_discrete_laplacian", r.min_discrete_laplacian},
          {"max_discrete_laplacian", r.max_discrete_laplacian},
          {"lambda_bound", r.lambda_bound},
          {"off_contact_eq_residual", r.off_contact_eq_residual},
          {"off_contact_nodes", r.off_contact_nodes}};
}

json fit_json(const DecayFit& f) {
  return {{"center", {f.center.x, f.center.y}}, {"p", f.p},
          {"radii", f.radii},                   {"norms", f.norms},
          {"fitted_slope", f.fitted_slope},     {"r_squared", f.r_squared},
          {"degenerate", f.degenerate},         {"alpha_estimate", f.alpha_estimate()}};
}

std::string polylines_csv(const std::vector<Polyline>& lines) {
  std::string s = "curve_id,x,y\n";
  for (std::size_t c = 0; c < lines.size(); ++c) {
    for (const Point& p : lines[c].points) {
      s += std::to_string(c) + "," + format_double(p.x) + "," + format_double(p.y) + "\n";
    }
  }
  return s;
}

json polylines_json(const std::vector<Polyline>& lines) {
  json out = json::array();
  for (const Polyline& l : lines) {
    out.push_back({{"points", l.points.size()},
                   {"closed", l.closed},
                   {"length", l.length()},
                   {"area", l.area()},
                   {"circularity", l.circularity()}});
  }
  return out;
}

std::string energy_trace_csv(const std::vector<EnergyRecord>& trace) {
  std::string s = "outer,half,e_lambda,e_v,total,min_modulus\n";
  for (const EnergyRecord& e : trace) {
    s += std::to_string(e.outer) + "," + e.half + "," + format_double(e.e_lambda) + "," + format_double(e.e_v) +
         "," + format_double(e.total()) + "," + format_double(e.min_modulus) + "\n";
  }
  return s;
}

std::string history_csv(const std::vector<ResidualRecord>& h) {
  std::string s = "iter,energy,residual\n";
  for (const ResidualRecord& r : h) {
    s += std::to_string(r.iter) + "," + format_double(r.energy) + "," + format_double(r.residual) + "\n";
  }
  return s;
}

CriticalConfig critical_config(const RunConfig& c, const DiskGrid& g) {
  CriticalConfig k;
  k.max_outer = c.max_outer;
  k.energy_rtol = c.energy_rtol;
  k.joint_tol = c.joint_tol;
  k.contact_tol = c.contact_tol.value_or(-1.0);
  k.obstacle.tol = c.obstacle_tol;
  k.obstacle.max_iters = c.obstacle_max_iters;
  k.obstacle.relaxation = c.relaxation.value_or(suggested_relaxation(g));
  k.sphere.tol = c.sphere_tol;
  k.sphere.max_iters = c.sphere_max_iters;
  return k;
}

double contact_tol_for(const RunConfig& c, const DiskGrid& g) {
  return c.contact_tol.value_or(default_contact_tol(g));
}

// Largest increase between consecutive energy-trace entries relative to
// max(1, E); negative when the trace is strictly decreasing.
double worst_energy_increase(const std::vector<EnergyRecord>& trace) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < trace.size(); ++i) {
    worst = std::max(worst, (trace[i].total() - trace[i - 1].total()) / std::max(1.0, trace[i - 1].total()));
  }
  return trace.size() > 1 ? worst : 0.0;
}

json critical_report(const CriticalPoint& cp, const RunConfig& c) {
  const DiskGrid& g = cp.lambda.grid();
  const double ctol = contact_tol_for(c, g);
  const MapField u = assemble_u(cp.lambda, cp.v);
  const auto fb = free_boundary(cp.lambda, ctol);
  return {{"converged", cp.converged},
          {"n", g.n()},
          {"h", g.h()},
          {"dim", cp.v.dim()},
          {"energy", cp.energy_trace.back().total()},
          {"e_lambda", cp.energy_trace.back().e_lambda},
          {"e_v", cp.energy_trace.back().e_v},
          {"dirichlet_energy_u", dirichlet_energy(u)},
          {"min_modulus_u", u.min_modulus()},
          {"max_unit_defect_v", cp.v.max_unit_defect()},
          {"worst_relative_energy_increase", worst_energy_increase(cp.energy_trace)},
          {"outer_iterations", cp.joint_report.outer_iterations},
          {"obstacle_sweeps", cp.joint_report.obstacle_sweeps},
          {"sphere_iterations", cp.joint_report.sphere_iterations},
          {"kkt", kkt_json(cp.joint_report.kkt)},
          {"tangential_residual", cp.joint_report.tangential_residual},
          {"el_residuals", el_json(cp.joint_report.el)},
          {"residual_radius", c.residual_radius},
          {"el_residuals_interior", el_json(el_residuals(cp.lambda, cp.v, c.residual_radius))},
          {"viscosity", viscosity_json(viscosity_report(cp.lambda, cp.v, ctol, c.residual_radius))},
          {"subharmonicity_margin", subharmonicity_margin(cp.lambda)},
          {"contact_radius", contact_radius(cp.lambda, 1e-9)},
          {"free_boundary", polylines_json(fb)}};
}

void export_critical(Artifacts& art, const CriticalPoint& cp, const RunConfig& c) {
  art.checkpoint("checkpoint", cp);
  art.text("energy_trace.csv", energy_trace_csv(cp.energy_trace), "energy-trace");
  art.text("free_boundary.csv", polylines_csv(free_boundary(cp.lambda, contact_tol_for(c, cp.lambda.grid()))),
           "polylines");
}

CriticalPoint obtain_critical(const RunConfig& c, Artifacts& art, std::ostream& log) {
  if (!c.checkpoint.empty()) {
    log << "loading checkpoint " << c.checkpoint << "\n";
    return read_checkpoint(c.checkpoint);
  }
  if (scenario_kind(c.scenario) != ScenarioKind::critical) {
    throw DomainError("scenario '" + c.scenario + "' does not produce a critical point");
  }
  const GridPtr grid = DiskGrid::build(c.n);
  log << "solving " << c.scenario << " at n = " << c.n << "\n";
  try {
    CriticalPoint cp = solve_critical(boundary_map(c, grid), critical_config(c, *grid));
    export_critical(art, cp, c);
    if (!cp.converged) {
      art.json_file("report.json", critical_report(cp, c), "report");
      throw ContractFailure{"outer iteration budget exhausted before convergence", "non-convergence"};
    }
    return cp;
  } catch (const CriticalNonConvergence& e) {
    export_critical(art, e.partial(), c);
    json rep = critical_report(e.partial(), c);
    rep["error"] = e.what();
    art.json_file("report.json", rep, "report");
    throw;
  }
}

// ---------------------------------------------------------------- commands

void cmd_solve_obstacle(const RunConfig& c, Artifacts& art, std::ostream& log) {
  const GridPtr grid = DiskGrid::build(c.n);
  const ScalarField g = ScalarField::constant(grid, c.weight);
  ObstacleSolveConfig oc;
  oc.tol = c.obstacle_tol;
  oc.max_iters = c.obstacle_max_iters;
  oc.relaxation = c.relaxation.value_or(suggested_relaxation(*grid));
  log << "solving radial obstacle at n = " << c.n << "\n";
  try {
    const ObstacleSolution s = solve_obstacle(g, ObstacleField::constant(grid, c.lambda_b), oc);
    art.field("lambda", s.lambda, "lambda");
    const double ctol = contact_tol_for(c, *grid);
    const auto fb = free_boundary(s.lambda, ctol);
    art.text("free_boundary.csv", polylines_csv(fb), "polylines");
    art.json_file("report.json",
                  {{"converged", true},
                   {"sweeps", s.sweeps},
                   {"kkt", kkt_json(s.report)},
                   {"subharmonicity_margin", subharmonicity_margin(s.lambda)},
                   {"contact_radius", contact_radius(s.lambda, 1e-9)},
                   {"free_boundary", polylines_json(fb)}},
                  "report");
  } catch (const ObstacleNonConvergence& e) {
    art.json_file("report.json", {{"converged", false}, {"error", e.what()}, {"sweeps", e.sweeps()}, {"kkt", kkt_json(e.report())}},
                  "report");
    throw;
  }
}

void cmd_so_solve(const RunConfig& c, Artifacts& art, std::ostream& log) {
  if (scenario_kind(c.scenario) != ScenarioKind::rotation) {
    throw DomainError("so-solve needs a rotation scenario, got '" + c.scenario + "'");
  }
  const GridPtr grid = DiskGrid::build(c.n);
  const ObstacleField lambda = ObstacleField::constant(grid, c.lambda_b);
  const RotationField boundary = boundary_rotation(c, grid);
  RotationSolveConfig rc;
  rc.tol = c.sphere_tol;
  rc.max_iters = c.sphere_max_iters;
  log << "solving " << c.scenario << " at n = " << c.n << "\n";
  RotationSolution s = [&] {
    try {
      return solve_rotation(lambda, boundary, rc);
    } catch (const RotationNonConvergence& e) {
      art.text("residual_history.csv", history_csv(e.history()), "residual-history");
      art.json_file("so_report.json", {{"converged", false}, {"error", e.what()}}, "report");
      throw;
    }
  }();
  art.field("P", s.P, "rotation");
  art.text("residual_history.csv", history_csv(s.history), "residual-history");
  json rep{{"converged", true},
           {"dim", s.P.dim()},
           {"iterations", s.iterations},
           {"residual", s.residual},
           {"max_orthogonality_drift", s.max_orthogonality_drift},
           {"energy", split_energy(lambda, s.P).e_v},
           {"conservation_residual", rotation_conservation_residual(lambda, s.P)},
           {"conservation_residual_interior", rotation_conservation_residual(lambda, s.P, c.residual_radius)},
           {"symmetry_defect", rotation_symmetry_defect(s.P)}};
  if (s.P.dim() == 2) {
    // SO(2) = S^1: the first column of P is a circle-valued map.
    std::vector<double> vals(grid->node_count() * 2, 0.0);
    for (std::size_t k : grid->active_nodes()) {
      vals[k * 2] = boundary.entry(k, 0, 0);
      vals[k * 2 + 1] = boundary.entry(k, 1, 0);
    }
    SphereSolveConfig sc;
    sc.tol = c.sphere_tol;
    sc.max_iters = c.sphere_max_iters;
    const SphereSolution v = solve_sphere(lambda, VectorField(grid, 2, vals), sc);
    rep["sphere"] = {{"energy", split_energy(lambda, v.v).e_v},
                     {"r_conservation", el_residuals(lambda, v.v).r_conservation},
                     {"r_conservation_interior", el_residuals(lambda, v.v, c.residual_radius).r_conservation}};
    rep["half_rotation_energy"] = 0.5 * split_energy(lambda, s.P).e_v;
  }
  art.json_file("so_report.json", rep, "report");
  if (s.max_orthogonality_drift > RotationField::kOrthogonalityTol) {
    throw ContractFailure{"orthogonality drift above tolerance"};
  }
}

void cmd_solve(const RunConfig& c, Artifacts& art, std::ostream& log) {
  switch (scenario_kind(c.scenario)) {
    case ScenarioKind::obstacle:
      return cmd_solve_obstacle(c, art, log);
    case ScenarioKind::rotation:
      return cmd_so_solve(c, art, log);
    case ScenarioKind::critical:
      break;
  }
  RunConfig fresh = c;
  fresh.checkpoint.clear();
  const CriticalPoint cp = obtain_critical(fresh, art, log);
  art.field("u", assemble_u(cp.lambda, cp.v), "u");
  art.json_file("report.json", critical_report(cp, c), "report");
}

void cmd_verify(const RunConfig& c, Artifacts& art, std::ostream& log) {
  const CriticalPoint cp = obtain_critical(c, art, log);
  const DiskGrid& g = cp.lambda.grid();
  const double ctol = contact_tol_for(c, g);
  const JointReport jr = joint_report(cp.lambda, cp.v, ctol);
  const ViscosityReport vr = viscosity_report(cp.lambda, cp.v, ctol, c.residual_radius);
  const double min_mod = assemble_u(cp.lambda, cp.v).min_modulus();
  const double increase = worst_energy_increase(cp.energy_trace);
  struct Check {
    const char* name;
    double value;
    double bound;
  };
  const std::vector<Check> checks{
      {"kkt_complementarity", jr.kkt.max_complementarity, c.joint_tol},
      {"kkt_negativity", jr.kkt.max_negativity, 1e-12},
      {"tangential_residual", jr.tangential_residual, c.joint_tol},
      {"unit_defect_v", cp.v.max_unit_defect(), 1e-12},
      {"admissibility_deficit", 1.0 - min_mod, 1e-9},
      {"energy_increase", increase, 10.0 * c.sphere_tol},
      {"viscosity_lower", -vr.min_discrete_laplacian, 1e-4},
      {"viscosity_upper", vr.max_discrete_laplacian - vr.lambda_bound, 1e-4},
  };
  json list = json::array();
  bool ok = true;
  for (const Check& ch : checks) {
    const bool pass = ch.value <= ch.bound;
    ok = ok && pass;
    list.push_back({{"name", ch.name}, {"value", ch.value}, {"bound", ch.bound}, {"pass", pass}});
    log << (pass ? "PASS " : "FAIL ") << ch.name << " = " << ch.value << " (bound " << ch.bound << ")\n";
  }
  art.json_file("verify.json",
                {{"pass", ok},
                 {"checks", list},
                 {"kkt", kkt_json(jr.kkt)},
                 {"el_residuals", el_json(jr.el)},
                 {"el_residuals_interior", el_json(el_residuals(cp.lambda, cp.v, c.residual_radius))},
                 {"viscosity", viscosity_json(vr)}},
                "verify");
  if (!ok) throw ContractFailure{"verification failed"};
}

void cmd_decay(const RunConfig& c, Artifacts& art, std::ostream& log) {
  const CriticalPoint cp = obtain_critical(c, art, log);
  const std::vector<Point> centers{{0.0, 0.0}, {0.3, 0.0}, {0.0, -0.3}, {-0.2, 0.2}};
  const auto radii = geometric_radii(c.decay_rmin, c.decay_rmax, c.decay_count);
  const CovectorField grad = gradient(cp.v);
  json fits = json::array();
  std::string csv = "center_x,center_y,p,radius,norm\n";
  bool ok = true;
  for (double p : c.p_values) {
    for (const DecayFit& f : morrey_fit(grad, centers, radii, p)) {
      fits.push_back(fit_json(f));
      ok = ok && !f.degenerate && f.alpha_estimate() > 0.0;
      for (std::size_t i = 0; i < f.radii.size(); ++i) {
        csv += format_double(f.center.x) + "," + format_double(f.center.y) + "," + format_double(p) + "," +
               format_double(f.radii[i]) + "," + format_double(f.norms[i]) + "\n";
      }
    }
  }
  art.json_file("decay.json", {{"pass", ok}, {"quantity", "grad v"}, {"fits", fits}}, "decay-fit");
  art.text("decay.csv", csv, "decay-norms");
  if (!ok) throw ContractFailure{"a Morrey fit was degenerate or non-positive"};
}

void cmd_hodge(const RunConfig& c, Artifacts& art, std::ostream& log) {
  const CriticalPoint cp = obtain_critical(c, art, log);
  std::vector<double> w(cp.lambda.values());
  for (double& x : w) x *= x;
  const ScalarField lam2(cp.lambda.grid_ptr(), std::move(w), cp.lambda.support());
  const CovectorField F = scale(gradient(cp.v), lam2);
  const Ball ball{{c.hodge_cx, c.hodge_cy}, c.hodge_radius};
  const HodgeParts hp = hodge_decompose(F, ball);
  art.field("hodge_a", hp.a, "hodge-a");
  art.field("hodge_b", hp.b, "hodge-b");
  art.field("hodge_H", hp.H, "hodge-H");
  const auto radii = geometric_radii(c.decay_rmin, std::min(c.decay_rmax, c.hodge_radius), c.decay_count);
  bool ok = hp.reconstruction_error <= 1e-8 && hp.max_div_H <= 1e-8 && hp.max_curl_H <= 1e-8;
  json fits = json::array();
  for (double p : c.p_values) {
    const DecayFit f = harmonic_decay_check(hp.H, ball, p, radii);
    fits.push_back(fit_json(f));
    ok = ok && !f.degenerate && std::abs(f.fitted_slope - 2.0 / p) <= 0.3;
  }
  art.json_file("hodge.json",
                {{"pass", ok},
                 {"ball", {{"center", {ball.center.x, ball.center.y}}, {"radius", ball.radius}}},
                 {"reconstruction_error", hp.reconstruction_error},
                 {"max_div_H", hp.max_div_H},
                 {"max_curl_H", hp.max_curl_H},
                 {"poisson_iterations", hp.poisson_iterations},
                 {"harmonic_decay", fits}},
                "hodge");
  if (!ok) throw ContractFailure{"Hodge checks failed"};
}

void cmd_wente(const RunConfig& c, Artifacts& art, std::ostream& log) {
  const GridPtr grid = DiskGrid::build(c.n);
  const Ball ball{{0.0, 0.0}, c.wente_radius};
  Uniform rng(c.seed);
  json pairs = json::array();
  double worst = 0.0;
  for (int i = 0; i < c.wente_pairs; ++i) {
    const ScalarField a = ScalarField::from_function(grid, random_trig(rng, 4, 1.0));
    const ScalarField b = ScalarField::from_function(grid, random_trig(rng, 4, 1.0));
    const WenteReport r = wente_check(a, b, ball);
    worst = std::max(worst, r.ratio);
    pairs.push_back({{"index", i}, {"ratio", r.ratio}, {"w_sup", r.w_sup}, {"grad_w_l2", r.grad_w_l2}});
  }
  const ScalarField x = ScalarField::from_function(grid, [](double px, double) { return px; });
  const ScalarField y = ScalarField::from_function(grid, [](double, double py) { return py; });
  const double equal_ratio = wente_check(x, x, ball).ratio;
  const double torsion_ratio = wente_check(x, y, ball).ratio;
  const bool ok = worst <= 1.05 && equal_ratio <= 1e-10;
  log << "max Wente ratio " << worst << ", a = b ratio " << equal_ratio << "\n";
  art.json_file("wente.json",
                {{"pass", ok},
                 {"max_ratio", worst},
                 {"equal_pair_ratio", equal_ratio},
                 {"torsion_ratio", torsion_ratio},
                 {"torsion_ratio_continuum", (0.25 + std::sqrt(std::numbers::pi / 8.0)) / std::numbers::pi},
                 {"pairs", pairs}},
                "wente");
  if (!ok) throw ContractFailure{"Wente bound violated"};
}

void cmd_export(const RunConfig& c, Artifacts& art, std::ostream& log) {
  const CriticalPoint cp = obtain_critical(c, art, log);
  if (!c.checkpoint.empty()) export_critical(art, cp, c);
  art.field("u", assemble_u(cp.lambda, cp.v), "u");
  art.field("mu", cp.lambda.excess(), "mu");
  art.field("g", weight_field(cp.v), "g");
  art.field("grad_v_sq", centered_gradient_energy_density(cp.v), "grad-v-squared");
  art.field("laplacian_lambda", laplacian(static_cast<const ScalarField&>(cp.lambda)), "laplacian-lambda");
  art.json_file("report.json", critical_report(cp, c), "report");
}

}  // namespace

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

int run_command(const std::string& command, const RunConfig& cfg, std::ostream& log) {
  if (std::find(command_names().begin(), command_names().end(), command) == command_names().end()) {
    log << "error: unknown command '" << command << "'\n";
    return kUsage;
  }
  Artifacts art(output_dir(cfg));
  art.text("config.txt", to_text(cfg), "config");
  int code = kOk;
  std::string status = "ok";
  try {
    if (command == "solve") cmd_solve(cfg, art, log);
    if (command == "verify") cmd_verify(cfg, art, log);
    if (command == "decay") cmd_decay(cfg, art, log);
    if (command == "hodge") cmd_hodge(cfg, art, log);
    if (command == "wente") cmd_wente(cfg, art, log);
    if (command == "so-solve") cmd_so_solve(cfg, art, log);
    if (command == "export") cmd_export(cfg, art, log);
  } catch (const ContractFailure& f) {
    log << "contract failed: " << f.what << "\n";
    code = kContractFailed;
    status = f.status;
  } catch (const NonConvergence& e) {
    log << "non-convergence: " << e.what() << "\n";
    code = kContractFailed;
    status = "non-convergence";
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    code = kUsage;
    status = "invalid-input";
  }
  art.manifest(command, cfg, status);
  log << "artifacts in " << art.dir().string() << " (" << status << ")\n";
  return code;
}

int run(const std::string& command, const fs::path& config_path, std::ostream& log) {
  if (std::find(command_names().begin(), command_names().end(), command) == command_names().end()) {
    log << "error: unknown command '" << command << "'\n";
    return kUsage;
  }
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kUsage;
  }
  return run_command(command, cfg, log);
}

}  // namespace geobs::cli
