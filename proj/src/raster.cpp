// SPDX-License-Identifier: Apache-2.0
#include "ecasurvey/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ecasurvey/error.hpp"
#include "util.hpp"

namespace ecasurvey {

using detail::format_double;

bool GridSpec::same_geometry(const GridSpec& o) const {
  constexpr double tol = 1e-9;
  return zone == o.zone && ncols == o.ncols && nrows == o.nrows &&
         std::abs(xll - o.xll) <= tol && std::abs(yll - o.yll) <= tol &&
         std::abs(cell_size - o.cell_size) <= tol;
}

void validate(const RasterGrid& r) {
  if (!(r.spec.cell_size > 0.0) || !std::isfinite(r.spec.cell_size))
    throw InputError("raster cell size must be positive");
  if (r.values.size() != r.spec.cell_count())
    throw InputError("raster holds " + std::to_string(r.values.size()) + " values, expected " +
                     std::to_string(r.spec.cell_count()));
}

void write_esri_ascii(std::ostream& out, const RasterGrid& r) {
  validate(r);
  out << "ncols " << r.spec.ncols << '\n'
      << "nrows " << r.spec.nrows << '\n'
      << "xllcorner " << format_double(r.spec.xll) << '\n'
      << "yllcorner " << format_double(r.spec.yll) << '\n'
      << "cellsize " << format_double(r.spec.cell_size) << '\n'
      << "NODATA_value " << format_double(r.nodata) << '\n';
  for (std::size_t row = 0; row < r.spec.nrows; ++row) {
    for (std::size_t col = 0; col < r.spec.ncols; ++col) {
      if (col) out << ' ';
      out << format_double(r.at(col, row));
    }
    out << '\n';
  }
}

RasterGrid read_esri_ascii(std::istream& in) {
  std::map<std::string, double> header;
  std::string token;
  // Header keys come first; the first numeric token starts the data block.
  std::vector<double> values;
  while (in >> token) {
    if (!token.empty() && (std::isalpha(static_cast<unsigned char>(token[0])))) {
      std::string key = token;
      std::transform(key.begin(), key.end(), key.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      std::string value;
      if (!(in >> value)) throw InputError("ESRI grid: header key '" + token + "' has no value");
      const auto v = detail::parse_double(value);
      if (!v) throw InputError("ESRI grid: bad value for '" + token + "'");
      header[key] = *v;
      continue;
    }
    const auto v = detail::parse_double(token);
    if (!v) throw InputError("ESRI grid: bad cell value '" + token + "'");
    values.push_back(*v);
    break;
  }
  while (in >> token) {
    const auto v = detail::parse_double(token);
    if (!v) throw InputError("ESRI grid: bad cell value '" + token + "'");
    values.push_back(*v);
  }
  for (const char* key : {"ncols", "nrows", "cellsize"})
    if (!header.count(key)) throw InputError(std::string("ESRI grid: missing header '") + key + "'");
  RasterGrid r;
  const double ncols = header["ncols"], nrows = header["nrows"];
  if (ncols < 1 || nrows < 1 || ncols != std::floor(ncols) || nrows != std::floor(nrows))
    throw InputError("ESRI grid: bad dimensions");
  r.spec.ncols = static_cast<std::size_t>(ncols);
  r.spec.nrows = static_cast<std::size_t>(nrows);
  r.spec.cell_size = header["cellsize"];
  if (header.count("xllcorner")) r.spec.xll = header["xllcorner"];
  else if (header.count("xllcenter")) r.spec.xll = header["xllcenter"] - 0.5 * r.spec.cell_size;
  else throw InputError("ESRI grid: missing xllcorner/xllcenter");
  if (header.count("yllcorner")) r.spec.yll = header["yllcorner"];
  else if (header.count("yllcenter")) r.spec.yll = header["yllcenter"] - 0.5 * r.spec.cell_size;
  else throw InputError("ESRI grid: missing yllcorner/yllcenter");
  if (header.count("nodata_value")) r.nodata = header["nodata_value"];
  r.values = std::move(values);
  validate(r);
  return r;
}

void write_zone_sidecar(std::ostream& out, const geodesy::UtmZone& zone) {
  out << "projection=UTM\n"
      << "datum=WGS84\n"
      << "zone=" << zone.zone << '\n'
      << "hemisphere=" << (zone.hemisphere == geodesy::Hemisphere::north ? "north" : "south")
      << '\n';
}

geodesy::UtmZone read_zone_sidecar(std::istream& in) {
  geodesy::UtmZone z;
  bool have_zone = false;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = detail::trim(line);
    const auto eq = t.find('=');
    if (t.empty() || t.front() == '#' || eq == std::string_view::npos) continue;
    const auto key = detail::trim(t.substr(0, eq));
    const auto value = detail::trim(t.substr(eq + 1));
    if (key == "zone") {
      const auto v = detail::parse_long(value);
      if (!v || *v < 1 || *v > 60) throw InputError("sidecar: bad zone");
      z.zone = static_cast<int>(*v);
      have_zone = true;
    } else if (key == "hemisphere") {
      if (value == "north") z.hemisphere = geodesy::Hemisphere::north;
      else if (value == "south") z.hemisphere = geodesy::Hemisphere::south;
      else throw InputError("sidecar: bad hemisphere");
    }
  }
  if (!have_zone) throw InputError("sidecar: missing zone");
  return z;
}

std::string sidecar_path(const std::string& raster_path) {
  const auto slash = raster_path.find_last_of('/');
  const auto dot = raster_path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    return raster_path.substr(0, dot) + ".prj";
  return raster_path + ".prj";
}

void save_raster(const std::string& path, const RasterGrid& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  write_esri_ascii(out, r);
  std::ofstream side(sidecar_path(path), std::ios::binary);
  if (!side) throw InputError("cannot write " + sidecar_path(path));
  write_zone_sidecar(side, r.spec.zone);
}

RasterGrid load_raster(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  RasterGrid r;
  try {
    r = read_esri_ascii(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
  std::ifstream side(sidecar_path(path), std::ios::binary);
  if (side) r.spec.zone = read_zone_sidecar(side);
  return r;
}

}  // namespace ecasurvey
