// SPDX-License-Identifier: Apache-2.0
#ifndef ECASURVEY_RASTER_HPP
#define ECASURVEY_RASTER_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ecasurvey/geodesy.hpp"

namespace ecasurvey {

/// Geometry of a north-up grid in UTM metres. (xll, yll) is the lower-left
/// corner of the lower-left cell.
struct GridSpec {
  geodesy::UtmZone zone;
  double xll = 0.0;
  double yll = 0.0;
  double cell_size = 1.0;
  std::size_t ncols = 0;
  std::size_t nrows = 0;

  /// Centre of cell (col, row); row 0 is the northernmost row.
  double center_x(std::size_t col) const { return xll + (static_cast<double>(col) + 0.5) * cell_size; }
  double center_y(std::size_t row) const {
    return yll + (static_cast<double>(nrows - row) - 0.5) * cell_size;
  }
  std::size_t cell_count() const { return ncols * nrows; }

  /// Same zone and dimensions, origin and cell size equal to 1e-9 m.
  bool same_geometry(const GridSpec& other) const;
};

inline constexpr double kDefaultNodata = -9999.0;

/// Row-major cell values, north to south.
struct RasterGrid {
  GridSpec spec;
  std::vector<double> values;
  double nodata = kDefaultNodata;

  double at(std::size_t col, std::size_t row) const { return values[row * spec.ncols + col]; }
  bool is_nodata(double v) const { return v == nodata; }
};

void validate(const RasterGrid& r);

/// ESRI ASCII grid: ncols, nrows, xllcorner, yllcorner, cellsize,
/// NODATA_value, then rows north to south. Zone metadata lives in a sidecar.
void write_esri_ascii(std::ostream& out, const RasterGrid& r);
/// Accepts xllcorner or xllcenter headers (case-insensitive keys).
RasterGrid read_esri_ascii(std::istream& in);

/// Sidecar text: "projection=UTM", "datum=WGS84", "zone=<n>", "hemisphere=...".
void write_zone_sidecar(std::ostream& out, const geodesy::UtmZone& zone);
geodesy::UtmZone read_zone_sidecar(std::istream& in);

/// Path of the sidecar belonging to a raster path (extension replaced by .prj).
std::string sidecar_path(const std::string& raster_path);

/// Writes the raster and its zone sidecar.
void save_raster(const std::string& path, const RasterGrid& r);
/// Reads a raster and, when present, its zone sidecar.
RasterGrid load_raster(const std::string& path);

}  // namespace ecasurvey

#endif  // ECASURVEY_RASTER_HPP
