// SPDX-License-Identifier: Apache-2.0
/*
 * geodesy.hpp
 *
 * WGS-84 <-> UTM conversion and the planar survey frame.
 *
 * The transverse Mercator projection is evaluated with the 6th-order
 * Krueger series in the third flattening n, which is accurate to well below
 * a millimetre inside a UTM zone and remains sub-centimetre several degrees
 * outside it (relevant when a survey pins the zone of its first fix).
 */
#ifndef ECASURVEY_GEODESY_HPP
#define ECASURVEY_GEODESY_HPP

#include <optional>

namespace ecasurvey::geodesy {

enum class Hemisphere { north, south };

/// Geographic coordinate on the WGS-84 ellipsoid, degrees.
struct GeoCoord {
  double lat = 0.0;  ///< [-90, 90]
  double lon = 0.0;  ///< [-180, 180)
};

/// Universal Transverse Mercator coordinate, metres.
struct UtmCoord {
  int zone = 1;
  Hemisphere hemisphere = Hemisphere::north;
  double easting = 500000.0;
  double northing = 0.0;
};

/// Zone + hemisphere pair. A survey pins this from its first fix.
struct UtmZone {
  int zone = 1;
  Hemisphere hemisphere = Hemisphere::north;

  friend bool operator==(const UtmZone&, const UtmZone&) = default;
};

/// Metres east/north of a survey origin.
struct LocalXY {
  double x = 0.0;
  double y = 0.0;
};

inline constexpr double kWgs84A = 6378137.0;
inline constexpr double kWgs84F = 1.0 / 298.257223563;
inline constexpr double kUtmK0 = 0.9996;
inline constexpr double kFalseEasting = 500000.0;
inline constexpr double kFalseNorthingSouth = 10000000.0;
inline constexpr double kMaxAbsLatitude = 84.0;

/// Throws InputError unless lat/lon are finite and in range.
void validate(const GeoCoord& p);
/// Throws InputError unless zone in [1, 60], easting in (0, 1e6) and
/// northing in [0, 1e7].
void validate(const UtmCoord& u);

/// Standard UTM zone of a coordinate, including the Norway and Svalbard
/// exceptions. Hemisphere follows the sign of latitude (0 is north).
UtmZone zone_of(const GeoCoord& p);

/// Longitude of the central meridian of `zone`, degrees.
double central_meridian(int zone);

/// Forward projection. When `pinned` is given it overrides the derived zone.
/// Throws InputError for |lat| > 84, non-finite input, or a projected
/// coordinate outside the UTM easting/northing range.
UtmCoord wgs84_to_utm(const GeoCoord& p,
                      const std::optional<UtmZone>& pinned = std::nullopt);

/// Inverse projection. Throws InputError for coordinates outside the zone's
/// valid range.
GeoCoord utm_to_wgs84(const UtmCoord& u);

/// Rigid translation into the survey frame anchored at `origin`.
/// Throws InputError on zone or hemisphere mismatch.
LocalXY utm_to_local(const UtmCoord& u, const UtmCoord& origin);

}  // namespace ecasurvey::geodesy

#endif  // ECASURVEY_GEODESY_HPP
