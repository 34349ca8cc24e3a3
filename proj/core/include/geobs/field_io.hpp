#pragma once

#include <filesystem>
#include <string>

#include "geobs/fields.hpp"

namespace geobs {

/// Field serialization.
///
/// `<stem>.csv` holds the header `x,y,class,value0,...,value{W-1}` followed by
/// one row per supported node in lexicographic node order. Numbers use the
/// shortest round-trip decimal representation, so write/read is lossless.
/// `<stem>.json` is the sidecar {"format","version","n","h","channels","kind"}.
/// See docs/formats.md.
inline constexpr int kFieldFormatVersion = 1;

std::string format_double(double v);
double parse_double(const std::string& s);

/// Writes `<stem>.csv` and `<stem>.json`; returns the two paths.
std::pair<std::filesystem::path, std::filesystem::path> write_field(
    const std::filesystem::path& stem, const NodeField& f, const std::string& kind);

struct LoadedField {
  GridPtr grid;
  int width = 0;
  std::string kind;
  std::vector<double> values;
  std::vector<std::uint8_t> support;
};

/// Reads a field written by write_field(). When `grid` is non-null the
/// stored resolution must match it (GridMismatch otherwise); malformed
/// files raise FormatError.
LoadedField read_field(const std::filesystem::path& stem, GridPtr grid = nullptr);

}  // namespace geobs
