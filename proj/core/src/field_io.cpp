#include "geobs/field_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "geobs/errors.hpp"

namespace geobs {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("not a number: '" + s + "'");
  }
  return v;
}

namespace {

fs::path with_ext(const fs::path& stem, const char* ext) {
  fs::path p = stem;
  p += ext;
  return p;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::pair<fs::path, fs::path> write_field(const fs::path& stem, const NodeField& f,
                                          const std::string& kind) {
  const DiskGrid& g = f.grid();
  const fs::path csv = with_ext(stem, ".csv");
  const fs::path json = with_ext(stem, ".json");
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());

  std::ofstream out(csv, std::ios::binary);
  if (!out) throw FormatError("cannot open " + csv.string() + " for writing");
  out << "x,y,class";
  for (int c = 0; c < f.width(); ++c) out << ",value" << c;
  out << '\n';
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (!f.defined(k)) continue;
    out << format_double(g.x(k)) << ',' << format_double(g.y(k)) << ',' << to_string(g.node_class(k));
    for (double v : f.at(k)) out << ',' << format_double(v);
    out << '\n';
  }
  if (!out) throw FormatError("failed writing " + csv.string());

  nlohmann::json meta = {{"format", "geobs-field"}, {"version", kFieldFormatVersion},
                         {"n", g.n()},              {"h", g.h()},
                         {"channels", f.width()},   {"kind", kind}};
  std::ofstream js(json, std::ios::binary);
  if (!js) throw FormatError("cannot open " + json.string() + " for writing");
  js << meta.dump(2) << '\n';
  return {csv, json};
}

LoadedField read_field(const fs::path& stem, GridPtr grid) {
  const fs::path csv = with_ext(stem, ".csv");
  const fs::path json = with_ext(stem, ".json");
  std::ifstream js(json);
  if (!js) throw FormatError("missing field sidecar " + json.string());
  nlohmann::json meta;
  try {
    js >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("corrupt sidecar " + json.string() + ": " + e.what());
  }
  if (meta.value("format", "") != "geobs-field" || meta.value("version", 0) != kFieldFormatVersion) {
    throw FormatError("unsupported field format in " + json.string());
  }
  LoadedField lf;
  const int n = meta.at("n").get<int>();
  lf.width = meta.at("channels").get<int>();
  lf.kind = meta.value("kind", "");
  if (grid) {
    if (grid->n() != n) {
      throw GridMismatch("field " + stem.string() + " has resolution " + std::to_string(n) +
                         ", expected " + std::to_string(grid->n()));
    }
    lf.grid = std::move(grid);
  } else {
    lf.grid = DiskGrid::build(n);
  }
  const DiskGrid& g = *lf.grid;
  lf.values.assign(g.node_count() * static_cast<std::size_t>(lf.width), 0.0);
  lf.support.assign(g.node_count(), 0);

  std::ifstream in(csv);
  if (!in) throw FormatError("missing field data " + csv.string());
  std::string line;
  std::getline(in, line);
  const auto header = split_csv(line);
  if (header.size() != static_cast<std::size_t>(3 + lf.width) || header[0] != "x" ||
      header[1] != "y" || header[2] != "class") {
    throw FormatError("bad header in " + csv.string());
  }
  // Rows appear in lexicographic node order; match each to the next lattice
  // node with the same coordinates.
  std::size_t cursor = 0;
  const double tol = 1e-9 * g.h();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) throw FormatError("bad row in " + csv.string());
    const double x = parse_double(cells[0]);
    const double y = parse_double(cells[1]);
    while (cursor < g.node_count() &&
           (std::abs(g.x(cursor) - x) > tol || std::abs(g.y(cursor) - y) > tol)) {
      ++cursor;
    }
    if (cursor == g.node_count() || !g.active(cursor) ||
        cells[2] != to_string(g.node_class(cursor))) {
      throw FormatError("row (" + cells[0] + "," + cells[1] + ") does not match the grid");
    }
    lf.support[cursor] = 1;
    for (int c = 0; c < lf.width; ++c) {
      lf.values[cursor * lf.width + c] = parse_double(cells[3 + c]);
    }
    ++cursor;
  }
  return lf;
}

}  // namespace geobs
