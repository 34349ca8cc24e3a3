#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace geobs::cli {

/// Everything a run needs. Parsed from a flat `key = value` file; keys that
/// are absent take the scenario's defaults, and to_text() writes every key,
/// so parse(to_text(c)) == c.
struct RunConfig {
  std::string scenario = "constant";
  int n = 64;
  int dim = 3;            ///< N, the target dimension (matrix size for rotation scenarios)
  double lambda_b = 1.5;  ///< boundary modulus |u_b|
  double beta = 0.4;      ///< latitude of the boundary circle
  double phi_slope = 1.5;  ///< harmonic angle phi = slope x + curvature (x^2 - y^2)
  double phi_curvature = 0.0;
  double weight = 4.0;    ///< constant g of the radial obstacle scenario
  std::uint64_t seed = 20240601;

  int max_outer = 200;
  double energy_rtol = 1e-10;
  double joint_tol = 1e-6;
  double obstacle_tol = 1e-8;
  int obstacle_max_iters = 20000;
  std::optional<double> relaxation;  ///< "auto" when empty
  double sphere_tol = 1e-8;
  int sphere_max_iters = 500;
  std::optional<double> contact_tol;  ///< "auto" (10 h^2) when empty
  double residual_radius = 0.8;

  double hodge_cx = 0.0;
  double hodge_cy = 0.0;
  double hodge_radius = 0.5;
  double decay_rmin = 0.05;
  double decay_rmax = 0.5;
  int decay_count = 6;
  std::vector<double> p_values{2.0, 4.0};
  int wente_pairs = 20;
  double wente_radius = 0.5;

  std::string output;      ///< default "out/<scenario>"
  std::string checkpoint;  ///< directory read by verify / export

  bool operator==(const RunConfig&) const = default;
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"constant",          "radial-obstacle", "harmonic-angle",
                                              "cap",               "partial-contact", "so2-harmonic-angle",
                                              "so3-random"};
  return names;
}

/// Throws FormatError on unknown or duplicate keys, malformed values, an
/// unknown scenario or values outside their domain.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string to_text(const RunConfig& cfg);

/// OBSTACLE_OUT when set, else cfg.output, else "out/<scenario>".
std::filesystem::path output_dir(const RunConfig& cfg);

}  // namespace geobs::cli
