#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "doctest.h"
#include "geobs/errors.hpp"
#include "geobs/field_io.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using geobs::cli::RunConfig;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "geobs_test_cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

RunConfig config(const std::string& text, const fs::path& out) {
  RunConfig c = geobs::cli::parse_config(text);
  c.output = out.string();
  return c;
}

}  // namespace

TEST_CASE("config text round-trips for every scenario") {
  for (const std::string& s : geobs::cli::scenario_names()) {
    const RunConfig c = geobs::cli::parse_config("scenario = " + s + "\nrelaxation = 1.7\np_values = 1.5, 3\n");
    CHECK(geobs::cli::parse_config(geobs::cli::to_text(c)) == c);
  }
  RunConfig d;
  d.output = "somewhere";
  d.checkpoint = "cp";
  d.contact_tol = 1e-5;
  CHECK(geobs::cli::parse_config(geobs::cli::to_text(d)) == d);
}

TEST_CASE("scenario defaults apply only to keys the file leaves out") {
  const RunConfig pc = geobs::cli::parse_config("scenario = partial-contact\n");
  CHECK(pc.lambda_b == 1.3);
  CHECK(pc.beta == 1.2);
  const RunConfig over = geobs::cli::parse_config("scenario = partial-contact\nbeta = 0.9  # comment\n");
  CHECK(over.beta == 0.9);
  CHECK(geobs::cli::parse_config("scenario = harmonic-angle").dim == 2);
  CHECK(geobs::cli::parse_config("scenario = radial-obstacle").n == 128);
  CHECK(!geobs::cli::parse_config("").relaxation.has_value());
}

TEST_CASE("malformed configurations are rejected") {
  using geobs::FormatError;
  CHECK_THROWS_AS(geobs::cli::parse_config("bogus = 1"), FormatError);
  CHECK_THROWS_AS(geobs::cli::parse_config("n = 32\nn = 64"), FormatError);
  CHECK_THROWS_AS(geobs::cli::parse_config("n = 3x"), FormatError);
  CHECK_THROWS_AS(geobs::cli::parse_config("n 32"), FormatError);
  CHECK_THROWS_AS(geobs::cli::parse_config("scenario = nowhere"), FormatError);
  CHECK_THROWS_AS(geobs::cli::parse_config("lambda_b = 0.5"), FormatError);
  CHECK_THROWS_AS(geobs::cli::parse_config("relaxation = 2.5"), FormatError);
  CHECK_THROWS_AS(geobs::cli::parse_config("scenario = so3-random\ndim = 2"), FormatError);
  CHECK_THROWS_AS(geobs::cli::parse_config("decay_count = 3"), FormatError);
  CHECK_THROWS_AS(geobs::cli::parse_config("p_values ="), FormatError);
}

TEST_CASE("sha256 matches published test vectors") {
  const fs::path dir = scratch("sha");
  std::ofstream(dir / "abc", std::ios::binary) << "abc";
  std::ofstream(dir / "empty", std::ios::binary).close();
  CHECK(geobs::cli::sha256_file(dir / "abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(geobs::cli::sha256_file(dir / "empty") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("usage errors exit with 2") {
  const fs::path dir = scratch("usage");
  std::ostringstream log;
  CHECK(geobs::cli::run("frobnicate", dir / "none.cfg", log) == geobs::cli::kUsage);
  CHECK(geobs::cli::run("solve", dir / "missing.cfg", log) == geobs::cli::kUsage);
  std::ofstream(dir / "bad.cfg") << "n = many\n";
  CHECK(geobs::cli::run("solve", dir / "bad.cfg", log) == geobs::cli::kUsage);
  // A valid config asking for something the scenario cannot provide.
  const RunConfig c = config("scenario = radial-obstacle\nn = 16", dir / "out");
  CHECK(geobs::cli::run_command("verify", c, log) == geobs::cli::kUsage);
  CHECK(read_json(dir / "out" / "manifest.json")["status"] == "invalid-input");
}

TEST_CASE("solve on the constant scenario writes a consistent manifest") {
  const fs::path dir = scratch("constant");
  std::ostringstream log;
  const RunConfig c = config("scenario = constant\nn = 16", dir);
  REQUIRE(geobs::cli::run_command("solve", c, log) == geobs::cli::kOk);

  const json m = read_json(dir / "manifest.json");
  CHECK(m["format"] == "geobs-manifest");
  CHECK(m["version"] == 1);
  CHECK(m["command"] == "solve");
  CHECK(m["scenario"] == "constant");
  CHECK(m["status"] == "ok");
  std::vector<std::string> paths;
  for (const json& a : m["artifacts"]) {
    const fs::path p = dir / a["path"].get<std::string>();
    REQUIRE(fs::exists(p));
    CHECK(a["bytes"] == fs::file_size(p));
    CHECK(a["sha256"] == geobs::cli::sha256_file(p));
    paths.push_back(a["path"]);
  }
  CHECK(std::is_sorted(paths.begin(), paths.end()));
  for (const char* want : {"config.txt", "report.json", "u.csv", "u.json", "checkpoint/lambda.csv",
                           "checkpoint/v.json", "checkpoint/trace.json", "energy_trace.csv", "free_boundary.csv"}) {
    CHECK_MESSAGE(std::find(paths.begin(), paths.end(), want) != paths.end(), want);
  }

  const geobs::LoadedField lam = geobs::read_field(dir / "checkpoint" / "lambda");
  for (std::size_t k = 0; k < lam.values.size(); ++k) {
    if (lam.support[k]) CHECK(std::abs(lam.values[k] - 1.5) <= 1e-7);
  }
  CHECK(slurp(dir / "free_boundary.csv") == "curve_id,x,y\n");
  CHECK(read_json(dir / "report.json")["converged"] == true);
  CHECK(geobs::cli::parse_config(slurp(dir / "config.txt")) == c);
}

TEST_CASE("OBSTACLE_OUT overrides the configured output directory") {
  const fs::path dir = scratch("env");
  RunConfig c = geobs::cli::parse_config("scenario = constant\nn = 12");
  c.output = (dir / "configured").string();
  ::setenv("OBSTACLE_OUT", (dir / "from_env").c_str(), 1);
  CHECK(geobs::cli::output_dir(c) == dir / "from_env");
  std::ostringstream log;
  CHECK(geobs::cli::run_command("solve", c, log) == geobs::cli::kOk);
  ::unsetenv("OBSTACLE_OUT");
  CHECK(fs::exists(dir / "from_env" / "manifest.json"));
  CHECK(!fs::exists(dir / "configured"));
  CHECK(geobs::cli::output_dir(c) == dir / "configured");
  c.output.clear();
  CHECK(geobs::cli::output_dir(c) == fs::path("out") / "constant");
}

TEST_CASE("an exhausted outer budget exits 1 and still reports") {
  const fs::path dir = scratch("budget");
  std::ostringstream log;
  const RunConfig c = config("scenario = partial-contact\nn = 24\nmax_outer = 1", dir);
  CHECK(geobs::cli::run_command("solve", c, log) == geobs::cli::kContractFailed);
  CHECK(read_json(dir / "manifest.json")["status"] == "non-convergence");
  const json rep = read_json(dir / "report.json");
  CHECK(rep["converged"] == false);
  CHECK(fs::exists(dir / "checkpoint" / "v.csv"));
}

TEST_CASE("verify, decay and export reuse a checkpoint") {
  const fs::path dir = scratch("chain");
  std::ostringstream log;
  const RunConfig solve = config("scenario = partial-contact\nn = 32", dir / "solve");
  REQUIRE(geobs::cli::run_command("solve", solve, log) == geobs::cli::kOk);

  RunConfig verify = config("scenario = partial-contact\nn = 32", dir / "verify");
  verify.checkpoint = (dir / "solve" / "checkpoint").string();
  CHECK(geobs::cli::run_command("verify", verify, log) == geobs::cli::kOk);
  const json v = read_json(dir / "verify" / "verify.json");
  CHECK(v["pass"] == true);
  CHECK(v["checks"].size() == 8);

  RunConfig decay = verify;
  decay.output = (dir / "decay").string();
  CHECK(geobs::cli::run_command("decay", decay, log) == geobs::cli::kOk);
  const json d = read_json(dir / "decay" / "decay.json");
  REQUIRE(d["fits"].size() == 8);  // four centers, two exponents
  for (const json& f : d["fits"]) {
    for (const char* key : {"center", "p", "radii", "norms", "fitted_slope", "r_squared", "degenerate", "alpha_estimate"}) {
      CHECK_MESSAGE(f.contains(key), key);
    }
    CHECK(f["radii"].size() == f["norms"].size());
    CHECK(f["alpha_estimate"].get<double>() ==
          doctest::Approx(f["p"].get<double>() * f["fitted_slope"].get<double>()));
  }
  const std::string csv = slurp(dir / "decay" / "decay.csv");
  CHECK(csv.rfind("center_x,center_y,p,radius,norm\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 8 * 6);

  RunConfig exp = verify;
  exp.output = (dir / "export").string();
  CHECK(geobs::cli::run_command("export", exp, log) == geobs::cli::kOk);
  for (const char* stem : {"u", "mu", "g", "grad_v_sq", "laplacian_lambda"}) {
    CHECK_MESSAGE(fs::exists(dir / "export" / (std::string(stem) + ".csv")), stem);
  }
  CHECK(slurp(dir / "export" / "u.csv") == slurp(dir / "solve" / "u.csv"));
}

TEST_CASE("repeated runs produce identical manifests") {
  const fs::path dir = scratch("determinism");
  std::ostringstream log;
  const RunConfig a = config("scenario = so3-random\nn = 16", dir / "a");
  const RunConfig b = config("scenario = so3-random\nn = 16", dir / "b");
  REQUIRE(geobs::cli::run_command("solve", a, log) == geobs::cli::kOk);
  REQUIRE(geobs::cli::run_command("solve", b, log) == geobs::cli::kOk);
  json ma = read_json(dir / "a" / "manifest.json");
  json mb = read_json(dir / "b" / "manifest.json");
  // config.txt records the output directory, which differs by construction.
  auto strip = [](json& m) {
    json kept = json::array();
    for (const json& x : m["artifacts"]) if (x["path"] != "config.txt") kept.push_back(x);
    m["artifacts"] = kept;
  };
  strip(ma);
  strip(mb);
  CHECK(ma == mb);
}

TEST_CASE("hodge and wente commands write their reports") {
  const fs::path dir = scratch("hodge_wente");
  std::ostringstream log;
  const RunConfig h = config("scenario = cap\nn = 32", dir / "hodge");
  CHECK(geobs::cli::run_command("hodge", h, log) == geobs::cli::kOk);
  CHECK(read_json(dir / "hodge" / "hodge.json").is_object());
  const RunConfig w = config("scenario = constant\nn = 32\nwente_pairs = 3", dir / "wente");
  CHECK(geobs::cli::run_command("wente", w, log) == geobs::cli::kOk);
  CHECK(read_json(dir / "wente" / "wente.json").is_object());
}
