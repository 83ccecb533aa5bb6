// SPDX-License-Identifier: Apache-2.0
/*
 * ingest.hpp
 *
 * EMI log and GNSS track parsing, and timestamp-based georeferencing.
 *
 * File schemas (UTF-8, comma separated, '.' decimal point, '#' comments):
 *
 *   EMI csv_v1   t_s,cond_mS_per_m,inphase_ppt[,lat_deg,lon_deg]
 *   GNSS csv_v1  t_s,lat_deg,lon_deg,alt_m,fix_quality
 *   NMEA         GGA sentences (NMEA 0183), checksum validated
 *
 * inphase_ppt and alt_m may be left empty. fix_quality is one of
 * rtk_fixed, rtk_float, single, none.
 */
#ifndef ECASURVEY_INGEST_HPP
#define ECASURVEY_INGEST_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecasurvey/geodesy.hpp"
#include "ecasurvey/placement.hpp"

namespace ecasurvey {

/// One EMI reading.
struct EcaSample {
  double t = 0.0;             ///< epoch seconds
  double conductivity = 0.0;  ///< out-of-phase channel, mS/m; may be negative
  std::optional<double> inphase;  ///< ppt
  std::optional<geodesy::GeoCoord> position;
};

enum class FixQuality { rtk_fixed, rtk_float, single, none };

const char* to_string(FixQuality q);
std::optional<FixQuality> parse_fix_quality(std::string_view text);

struct GnssFix {
  double t = 0.0;
  geodesy::GeoCoord pos;
  std::optional<double> alt;  ///< metres, carried as metadata only
  FixQuality quality = FixQuality::single;
};

enum class Acquisition { manual, robotized };

struct SurveyMetadata {
  std::string field_id;
  std::optional<PlacementConfig> placement;
  double depth_mode = 0.7;  ///< depth of investigation, 0.35 or 0.7 m
  Acquisition acquisition = Acquisition::robotized;
};

/// Georeferenced, time-ordered EMI samples.
struct SurveyTrack {
  std::vector<EcaSample> samples;
  SurveyMetadata meta;
};

/// Throws InputError if a sample lacks a position, timestamps decrease, or
/// the depth mode is not one of the sensor's two modes.
void validate(const SurveyTrack& track);

struct EmiParseResult {
  std::vector<EcaSample> samples;
  std::vector<std::string> warnings;  ///< non-monotone timestamps etc.
};

enum class GnssSchema { csv_v1, nmea_gga };

struct GnssParseResult {
  std::vector<GnssFix> fixes;
  std::size_t skipped_checksum = 0;
  std::size_t skipped_other = 0;  ///< non-GGA or empty-position sentences
};

/// Parses an EMI csv_v1 stream. Malformed rows raise InputError naming the
/// line; non-monotone timestamps only produce warnings.
EmiParseResult parse_emi_log(std::istream& in);

/// Parses a GNSS track. Out-of-order timestamps raise InputError.
/// For NMEA, `day_epoch` is added to the time-of-day field; a backwards jump
/// of more than 12 h is treated as a midnight rollover.
GnssParseResult parse_gnss_track(std::istream& in, GnssSchema schema,
                                 double day_epoch = 0.0);

/// Validates an NMEA sentence checksum ("$...*hh").
bool nmea_checksum_ok(std::string_view sentence);

using FixPredicate = std::function<bool(const GnssFix&)>;

/// Default predicate: keeps rtk_fixed and rtk_float.
bool keep_rtk(const GnssFix& fix);

struct GeorefOptions {
  double max_gap = 1.0;  ///< seconds
  FixPredicate keep = keep_rtk;
};

struct GeorefResult {
  SurveyTrack track;
  std::size_t dropped_outside = 0;  ///< sample time outside fix coverage
  std::size_t dropped_gap = 0;      ///< bracketed by a gap > max_gap
  std::size_t dropped() const { return dropped_outside + dropped_gap; }
};

/// Linear per-coordinate interpolation of each sample position between its
/// two bracketing fixes. Throws InputError with zero usable fixes or
/// unsorted fixes, EmptyResultError when every sample is dropped.
GeorefResult georeference(const std::vector<EcaSample>& samples,
                          const std::vector<GnssFix>& fixes,
                          const GeorefOptions& options = {},
                          SurveyMetadata meta = {});

/// Writes a track as EMI csv_v1 with position columns. Metadata goes into
/// leading "# key=value" comment lines. Numbers use shortest round-trip form.
void write_track_csv(std::ostream& out, const SurveyTrack& track);

/// Reads a track written by write_track_csv (or any EMI csv_v1 file with
/// position columns). Every row must carry a position.
SurveyTrack read_track_csv(std::istream& in);

}  // namespace ecasurvey

#endif  // ECASURVEY_INGEST_HPP
