// SPDX-License-Identifier: Apache-2.0
// Shared helpers for the unit and acceptance tests.
#ifndef ECASURVEY_TESTS_SUPPORT_HPP
#define ECASURVEY_TESTS_SUPPORT_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ecasurvey/geodesy.hpp"
#include "ecasurvey/geostat.hpp"
#include "ecasurvey/ingest.hpp"
#include "ecasurvey/rng.hpp"

namespace testing {

inline std::string source_path(const std::string& rel) { return std::string(ECASURVEY_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ecasurvey_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Track whose samples sit at planar offsets (metres) from a zone 11 origin
/// near the Salinity Lab site.
inline ecasurvey::SurveyTrack track_from_planar(const std::vector<ecasurvey::geostat::PlanarPoint>& pts,
                                                double t0 = 1000.0) {
  using namespace ecasurvey;
  const auto origin = geodesy::wgs84_to_utm({33.97276, -117.320437});
  SurveyTrack track;
  track.meta.field_id = "synthetic";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto u = origin;
    u.easting += pts[i].x;
    u.northing += pts[i].y;
    EcaSample s;
    s.t = t0 + 0.1 * static_cast<double>(i);
    s.conductivity = pts[i].z;
    s.position = geodesy::utm_to_wgs84(u);
    track.samples.push_back(s);
  }
  return track;
}

/// Serpentine survey path of `n` samples over a `width` x `height` m field.
inline std::vector<ecasurvey::geostat::PlanarPoint> serpentine(std::size_t n, double width, double height,
                                                               std::size_t passes) {
  std::vector<ecasurvey::geostat::PlanarPoint> pts;
  const std::size_t per_pass = n / passes;
  for (std::size_t p = 0; p < passes; ++p) {
    const double y = height * (static_cast<double>(p) + 0.5) / static_cast<double>(passes);
    for (std::size_t i = 0; i < per_pass; ++i) {
      double f = (static_cast<double>(i) + 0.5) / static_cast<double>(per_pass);
      if (p % 2 == 1) f = 1.0 - f;
      pts.push_back({f * width, y, 0.0});
    }
  }
  return pts;
}

}  // namespace testing

#endif  // ECASURVEY_TESTS_SUPPORT_HPP
