#include "run_config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "geobs/errors.hpp"
#include "geobs/field_io.hpp"

namespace geobs::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class Int>
Int parse_int(const std::string& key, const std::string& s) {
  Int v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("key '" + key + "': not an integer: '" + s + "'");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& s) {
  try {
    return parse_double(s);
  } catch (const FormatError&) {
    throw FormatError("key '" + key + "': not a number: '" + s + "'");
  }
}

std::optional<double> parse_auto(const std::string& key, const std::string& s) {
  if (s == "auto") return std::nullopt;
  return parse_real(key, s);
}

std::vector<double> parse_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_real(key, trim(item)));
  if (out.empty()) throw FormatError("key '" + key + "': empty list");
  return out;
}

std::string auto_text(const std::optional<double>& v) { return v ? format_double(*v) : "auto"; }

// Parameters a scenario fixes unless the file overrides them.
void apply_scenario_defaults(RunConfig& c, const std::set<std::string>& given) {
  auto set = [&](const char* key, auto& field, auto value) {
    if (!given.count(key)) field = value;
  };
  if (c.scenario == "constant") {
    set("lambda_b", c.lambda_b, 1.5);
  } else if (c.scenario == "radial-obstacle") {
    set("lambda_b", c.lambda_b, 1.05);
    set("weight", c.weight, 4.0);
    set("n", c.n, 128);
  } else if (c.scenario == "harmonic-angle" || c.scenario == "so2-harmonic-angle") {
    set("dim", c.dim, 2);
    set("lambda_b", c.lambda_b, 1.0);
  } else if (c.scenario == "cap") {
    set("lambda_b", c.lambda_b, 1.0);
    set("beta", c.beta, 0.4);
  } else if (c.scenario == "partial-contact") {
    set("lambda_b", c.lambda_b, 1.3);
    set("beta", c.beta, 1.2);
  } else if (c.scenario == "so3-random") {
    set("lambda_b", c.lambda_b, 1.0);
  }
}

void validate(const RunConfig& c) {
  bool known = false;
  for (const auto& s : scenario_names()) known = known || s == c.scenario;
  if (!known) throw FormatError("unknown scenario '" + c.scenario + "'");
  if (c.n < 8) throw FormatError("n must be at least 8");
  if (c.dim < 2) throw FormatError("dim must be at least 2");
  if ((c.scenario == "harmonic-angle" || c.scenario == "so2-harmonic-angle") && c.dim != 2) {
    throw FormatError(c.scenario + " requires dim = 2");
  }
  if ((c.scenario == "cap" || c.scenario == "partial-contact") && c.dim != 3) {
    throw FormatError(c.scenario + " requires dim = 3");
  }
  if (c.scenario == "so3-random" && c.dim != 3) throw FormatError("so3-random requires dim = 3");
  if (!(c.lambda_b >= 1.0)) throw FormatError("lambda_b must be at least 1");
  if (c.max_outer < 0 || c.obstacle_max_iters < 1 || c.sphere_max_iters < 0) {
    throw FormatError("iteration counts must be non-negative");
  }
  if (c.relaxation && !(*c.relaxation > 0.0 && *c.relaxation < 2.0)) {
    throw FormatError("relaxation must lie in (0, 2)");
  }
  if (!(c.joint_tol > 0.0 && c.obstacle_tol > 0.0 && c.sphere_tol > 0.0 && c.energy_rtol > 0.0)) {
    throw FormatError("tolerances must be positive");
  }
  if (c.decay_count < 5) throw FormatError("decay_count must be at least 5");
  if (c.wente_pairs < 0) throw FormatError("wente_pairs must be non-negative");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"scenario", [](RunConfig& c, auto&, auto& v) { c.scenario = v; }},
      {"n", [](RunConfig& c, auto& k, auto& v) { c.n = parse_int<int>(k, v); }},
      {"dim", [](RunConfig& c, auto& k, auto& v) { c.dim = parse_int<int>(k, v); }},
      {"lambda_b", [](RunConfig& c, auto& k, auto& v) { c.lambda_b = parse_real(k, v); }},
      {"beta", [](RunConfig& c, auto& k, auto& v) { c.beta = parse_real(k, v); }},
      {"phi_slope", [](RunConfig& c, auto& k, auto& v) { c.phi_slope = parse_real(k, v); }},
      {"phi_curvature", [](RunConfig& c, auto& k, auto& v) { c.phi_curvature = parse_real(k, v); }},
      {"weight", [](RunConfig& c, auto& k, auto& v) { c.weight = parse_real(k, v); }},
      {"seed", [](RunConfig& c, auto& k, auto& v) { c.seed = parse_int<std::uint64_t>(k, v); }},
      {"max_outer", [](RunConfig& c, auto& k, auto& v) { c.max_outer = parse_int<int>(k, v); }},
      {"energy_rtol", [](RunConfig& c, auto& k, auto& v) { c.energy_rtol = parse_real(k, v); }},
      {"joint_tol", [](RunConfig& c, auto& k, auto& v) { c.joint_tol = parse_real(k, v); }},
      {"obstacle_tol", [](RunConfig& c, auto& k, auto& v) { c.obstacle_tol = parse_real(k, v); }},
      {"obstacle_max_iters", [](RunConfig& c, auto& k, auto& v) { c.obstacle_max_iters = parse_int<int>(k, v); }},
      {"relaxation", [](RunConfig& c, auto& k, auto& v) { c.relaxation = parse_auto(k, v); }},
      {"sphere_tol", [](RunConfig& c, auto& k, auto& v) { c.sphere_tol = parse_real(k, v); }},
      {"sphere_max_iters", [](RunConfig& c, auto& k, auto& v) { c.sphere_max_iters = parse_int<int>(k, v); }},
      {"contact_tol", [](RunConfig& c, auto& k, auto& v) { c.contact_tol = parse_auto(k, v); }},
      {"residual_radius", [](RunConfig& c, auto& k, auto& v) { c.residual_radius = parse_real(k, v); }},
      {"hodge_cx", [](RunConfig& c, auto& k, auto& v) { c.hodge_cx = parse_real(k, v); }},
      {"hodge_cy", [](RunConfig& c, auto& k, auto& v) { c.hodge_cy = parse_real(k, v); }},
      {"hodge_radius", [](RunConfig& c, auto& k, auto& v) { c.hodge_radius = parse_real(k, v); }},
      {"decay_rmin", [](RunConfig& c, auto& k, auto& v) { c.decay_rmin = parse_real(k, v); }},
      {"decay_rmax", [](RunConfig& c, auto& k, auto& v) { c.decay_rmax = parse_real(k, v); }},
      {"decay_count", [](RunConfig& c, auto& k, auto& v) { c.decay_count = parse_int<int>(k, v); }},
      {"p_values", [](RunConfig& c, auto& k, auto& v) { c.p_values = parse_list(k, v); }},
      {"wente_pairs", [](RunConfig& c, auto& k, auto& v) { c.wente_pairs = parse_int<int>(k, v); }},
      {"wente_radius", [](RunConfig& c, auto& k, auto& v) { c.wente_radius = parse_real(k, v); }},
      {"output", [](RunConfig& c, auto&, auto& v) { c.output = v; }},
      {"checkpoint", [](RunConfig& c, auto&, auto& v) { c.checkpoint = v; }},
  };
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::set<std::string> given;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw FormatError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!given.insert(key).second) throw FormatError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    it->second(c, key, value);
  }
  apply_scenario_defaults(c, given);
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_text(const RunConfig& c) {
  std::ostringstream out;
  auto kv = [&](const char* k, const std::string& v) { out << k << " = " << v << '\n'; };
  kv("scenario", c.scenario);
  kv("n", std::to_string(c.n));
  kv("dim", std::to_string(c.dim));
  kv("lambda_b", format_double(c.lambda_b));
  kv("beta", format_double(c.beta));
  kv("phi_slope", format_double(c.phi_slope));
  kv("phi_curvature", format_double(c.phi_curvature));
  kv("weight", format_double(c.weight));
  kv("seed", std::to_string(c.seed));
  kv("max_outer", std::to_string(c.max_outer));
  kv("energy_rtol", format_double(c.energy_rtol));
  kv("joint_tol", format_double(c.joint_tol));
  kv("obstacle_tol", format_double(c.obstacle_tol));
  kv("obstacle_max_iters", std::to_string(c.obstacle_max_iters));
  kv("relaxation", auto_text(c.relaxation));
  kv("sphere_tol", format_double(c.sphere_tol));
  kv("sphere_max_iters", std::to_string(c.sphere_max_iters));
  kv("contact_tol", auto_text(c.contact_tol));
  kv("residual_radius", format_double(c.residual_radius));
  kv("hodge_cx", format_double(c.hodge_cx));
  kv("hodge_cy", format_double(c.hodge_cy));
  kv("hodge_radius", format_double(c.hodge_radius));
  kv("decay_rmin", format_double(c.decay_rmin));
  kv("decay_rmax", format_double(c.decay_rmax));
  kv("decay_count", std::to_string(c.decay_count));
  std::string ps;
  for (std::size_t i = 0; i < c.p_values.size(); ++i) ps += (i ? "," : "") + format_double(c.p_values[i]);
  kv("p_values", ps);
  kv("wente_pairs", std::to_string(c.wente_pairs));
  kv("wente_radius", format_double(c.wente_radius));
  if (!c.output.empty()) kv("output", c.output);
  if (!c.checkpoint.empty()) kv("checkpoint", c.checkpoint);
  return out.str();
}

std::filesystem::path output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("OBSTACLE_OUT"); env != nullptr && *env != '\0') return env;
  if (!cfg.output.empty()) return cfg.output;
  return std::filesystem::path("out") / cfg.scenario;
}

}  // namespace geobs::cli
