// SPDX-License-Identifier: Apache-2.0
#include "ecasurvey/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "ecasurvey/error.hpp"
#include "util.hpp"

namespace ecasurvey {

using detail::format_double;
using detail::parse_double;
using detail::split;
using detail::trim;

const char* to_string(FixQuality q) {
  switch (q) {
    case FixQuality::rtk_fixed: return "rtk_fixed";
    case FixQuality::rtk_float: return "rtk_float";
    case FixQuality::single: return "single";
    case FixQuality::none: return "none";
  }
  return "none";
}

std::optional<FixQuality> parse_fix_quality(std::string_view text) {
  text = trim(text);
  if (text == "rtk_fixed") return FixQuality::rtk_fixed;
  if (text == "rtk_float") return FixQuality::rtk_float;
  if (text == "single") return FixQuality::single;
  if (text == "none") return FixQuality::none;
  return std::nullopt;
}

bool keep_rtk(const GnssFix& fix) {
  return fix.quality == FixQuality::rtk_fixed || fix.quality == FixQuality::rtk_float;
}

void validate(const SurveyTrack& track) {
  if (track.meta.depth_mode != 0.35 && track.meta.depth_mode != 0.7)
    throw InputError("depth_mode must be 0.35 or 0.7 m");
  if (track.meta.placement) validate(*track.meta.placement);
  for (std::size_t i = 0; i < track.samples.size(); ++i) {
    const auto& s = track.samples[i];
    if (!s.position) throw InputError("track sample " + std::to_string(i) + " has no position");
    geodesy::validate(*s.position);
    if (!std::isfinite(s.t) || !std::isfinite(s.conductivity))
      throw InputError("track sample " + std::to_string(i) + " is not finite");
    if (i > 0 && s.t < track.samples[i - 1].t)
      throw InputError("track timestamps decrease at sample " + std::to_string(i));
  }
}

namespace {

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

double require_double(std::string_view field, const char* name, std::size_t line) {
  const auto v = parse_double(field);
  if (!v) throw InputError(at_line(line) + "cannot parse " + name + " '" + std::string(field) + "'");
  if (!std::isfinite(*v)) throw InputError(at_line(line) + name + " is not finite");
  return *v;
}

// Metadata carried in "# key=value" comment lines of track files.
void apply_meta(SurveyMetadata& meta, std::string_view key, std::string_view value,
                std::optional<double>& d_b, std::optional<double>& d_h) {
  if (key == "field_id") {
    meta.field_id = std::string(value);
  } else if (key == "depth_mode") {
    if (auto v = parse_double(value)) meta.depth_mode = *v;
  } else if (key == "acquisition") {
    meta.acquisition = value == "manual" ? Acquisition::manual : Acquisition::robotized;
  } else if (key == "placement_d_b") {
    d_b = parse_double(value);
  } else if (key == "placement_d_h") {
    d_h = parse_double(value);
  }
}

struct EmiColumns {
  int t = -1, cond = -1, inphase = -1, lat = -1, lon = -1;
  std::size_t count = 0;
};

EmiColumns map_emi_header(std::string_view header, std::size_t line) {
  EmiColumns c;
  const auto cols = split(header);
  c.count = cols.size();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const auto name = cols[i];
    int* slot = nullptr;
    if (name == "t_s") slot = &c.t;
    else if (name == "cond_mS_per_m") slot = &c.cond;
    else if (name == "inphase_ppt") slot = &c.inphase;
    else if (name == "lat_deg") slot = &c.lat;
    else if (name == "lon_deg") slot = &c.lon;
    else throw InputError(at_line(line) + "unknown column '" + std::string(name) + "'");
    if (*slot >= 0) throw InputError(at_line(line) + "duplicate column '" + std::string(name) + "'");
    *slot = static_cast<int>(i);
  }
  if (c.t < 0) throw InputError(at_line(line) + "missing required column 't_s'");
  if (c.cond < 0) throw InputError(at_line(line) + "missing required column 'cond_mS_per_m'");
  if (c.inphase < 0) throw InputError(at_line(line) + "missing required column 'inphase_ppt'");
  if ((c.lat < 0) != (c.lon < 0))
    throw InputError(at_line(line) + "lat_deg and lon_deg must appear together");
  return c;
}

EmiParseResult parse_emi_impl(std::istream& in, SurveyMetadata* meta) {
  EmiParseResult result;
  std::optional<EmiColumns> cols;
  std::optional<double> d_b, d_h;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (line_no == 1) raw = detail::strip_bom(std::move(raw));
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (meta) {
        const auto body = trim(line.substr(1));
        const auto eq = body.find('=');
        if (eq != std::string_view::npos)
          apply_meta(*meta, trim(body.substr(0, eq)), trim(body.substr(eq + 1)), d_b, d_h);
      }
      continue;
    }
    if (!cols) {
      cols = map_emi_header(line, line_no);
      continue;
    }
    const auto f = split(line);
    if (f.size() != cols->count)
      throw InputError(at_line(line_no) + "expected " + std::to_string(cols->count) +
                       " fields, got " + std::to_string(f.size()));
    EcaSample s;
    s.t = require_double(f[cols->t], "t_s", line_no);
    s.conductivity = require_double(f[cols->cond], "cond_mS_per_m", line_no);
    if (!f[cols->inphase].empty()) s.inphase = require_double(f[cols->inphase], "inphase_ppt", line_no);
    if (cols->lat >= 0) {
      const bool has_lat = !f[cols->lat].empty();
      const bool has_lon = !f[cols->lon].empty();
      if (has_lat != has_lon) throw InputError(at_line(line_no) + "lat_deg/lon_deg half empty");
      if (has_lat) {
        geodesy::GeoCoord p{require_double(f[cols->lat], "lat_deg", line_no),
                            require_double(f[cols->lon], "lon_deg", line_no)};
        try {
          geodesy::validate(p);
        } catch (const InputError& e) {
          throw InputError(at_line(line_no) + e.what());
        }
        s.position = p;
      }
    }
    if (!result.samples.empty() && s.t < result.samples.back().t)
      result.warnings.push_back(at_line(line_no) + "timestamp " + format_double(s.t) +
                                " precedes " + format_double(result.samples.back().t));
    result.samples.push_back(s);
  }
  if (!cols && !result.samples.empty()) throw InputError("missing header");
  if (meta && d_b && d_h) meta->placement = PlacementConfig{*d_b, *d_h};
  return result;
}

// ddmm.mmmm -> decimal degrees.
std::optional<double> nmea_angle(std::string_view field, std::string_view hemi, int deg_digits) {
  field = trim(field);
  if (field.size() < static_cast<std::size_t>(deg_digits) + 1) return std::nullopt;
  const auto deg = detail::parse_long(field.substr(0, deg_digits));
  const auto min = parse_double(field.substr(deg_digits));
  if (!deg || !min || *min < 0.0 || *min >= 60.0) return std::nullopt;
  double v = static_cast<double>(*deg) + *min / 60.0;
  if (hemi == "S" || hemi == "W") v = -v;
  else if (hemi != "N" && hemi != "E") return std::nullopt;
  return v;
}

std::optional<double> nmea_time_of_day(std::string_view field) {
  field = trim(field);
  if (field.size() < 6) return std::nullopt;
  const auto hh = detail::parse_long(field.substr(0, 2));
  const auto mm = detail::parse_long(field.substr(2, 2));
  const auto ss = parse_double(field.substr(4));
  if (!hh || !mm || !ss || *hh > 23 || *mm > 59 || *ss < 0.0 || *ss >= 61.0) return std::nullopt;
  return static_cast<double>(*hh * 3600 + *mm * 60) + *ss;
}

FixQuality gga_quality(long q) {
  switch (q) {
    case 0: return FixQuality::none;
    case 4: return FixQuality::rtk_fixed;
    case 5: return FixQuality::rtk_float;
    default: return FixQuality::single;
  }
}

void append_fix(std::vector<GnssFix>& fixes, const GnssFix& fix, std::size_t line) {
  if (!fixes.empty() && !(fix.t > fixes.back().t))
    throw InputError(at_line(line) + "fixes out of time order: t=" + format_double(fix.t) +
                     " follows t=" + format_double(fixes.back().t));
  fixes.push_back(fix);
}

GnssParseResult parse_gnss_csv(std::istream& in) {
  GnssParseResult result;
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  int idx[5] = {-1, -1, -1, -1, -1};
  static constexpr const char* kNames[5] = {"t_s", "lat_deg", "lon_deg", "alt_m", "fix_quality"};
  while (std::getline(in, raw)) {
    ++line_no;
    if (line_no == 1) raw = detail::strip_bom(std::move(raw));
    if (detail::is_comment_or_blank(raw)) continue;
    const auto f = split(trim(raw));
    if (!have_header) {
      if (f.size() != 5) throw InputError(at_line(line_no) + "GNSS header must have 5 columns");
      for (std::size_t i = 0; i < f.size(); ++i) {
        const auto it = std::find(std::begin(kNames), std::end(kNames), f[i]);
        if (it == std::end(kNames))
          throw InputError(at_line(line_no) + "unknown column '" + std::string(f[i]) + "'");
        idx[it - std::begin(kNames)] = static_cast<int>(i);
      }
      for (int k = 0; k < 5; ++k)
        if (idx[k] < 0) throw InputError(at_line(line_no) + "missing column '" + kNames[k] + "'");
      have_header = true;
      continue;
    }
    if (f.size() != 5)
      throw InputError(at_line(line_no) + "expected 5 fields, got " + std::to_string(f.size()));
    GnssFix fix;
    fix.t = require_double(f[idx[0]], "t_s", line_no);
    fix.pos = {require_double(f[idx[1]], "lat_deg", line_no),
               require_double(f[idx[2]], "lon_deg", line_no)};
    try {
      geodesy::validate(fix.pos);
    } catch (const InputError& e) {
      throw InputError(at_line(line_no) + e.what());
    }
    if (!f[idx[3]].empty()) fix.alt = require_double(f[idx[3]], "alt_m", line_no);
    const auto q = parse_fix_quality(f[idx[4]]);
    if (!q) throw InputError(at_line(line_no) + "unknown fix_quality '" + std::string(f[idx[4]]) + "'");
    fix.quality = *q;
    append_fix(result.fixes, fix, line_no);
  }
  return result;
}

GnssParseResult parse_gnss_nmea(std::istream& in, double day_epoch) {
  GnssParseResult result;
  std::string raw;
  std::size_t line_no = 0;
  double day_offset = 0.0;
  double last_tod = -1.0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() != '$') {
      ++result.skipped_other;
      continue;
    }
    if (!nmea_checksum_ok(line)) {
      ++result.skipped_checksum;
      continue;
    }
    const auto body = line.substr(1, line.find('*') - 1);
    const auto f = split(body);
    if (f.empty() || f[0].size() < 5 || f[0].substr(f[0].size() - 3) != "GGA") {
      ++result.skipped_other;
      continue;
    }
    if (f.size() < 10) throw InputError(at_line(line_no) + "truncated GGA sentence");
    if (f[2].empty() || f[4].empty()) {
      ++result.skipped_other;
      continue;
    }
    const auto tod = nmea_time_of_day(f[1]);
    const auto lat = nmea_angle(f[2], f[3], 2);
    const auto lon = nmea_angle(f[4], f[5], 3);
    if (!tod) throw InputError(at_line(line_no) + "unparseable GGA time '" + std::string(f[1]) + "'");
    if (!lat || !lon) throw InputError(at_line(line_no) + "unparseable GGA coordinate");
    const auto q = detail::parse_long(f[6]);
    if (!q) throw InputError(at_line(line_no) + "unparseable GGA fix quality");
    if (last_tod >= 0.0 && *tod < last_tod - 43200.0) day_offset += 86400.0;
    last_tod = *tod;

    GnssFix fix;
    fix.t = day_epoch + day_offset + *tod;
    fix.pos = {*lat, *lon};
    try {
      geodesy::validate(fix.pos);
    } catch (const InputError& e) {
      throw InputError(at_line(line_no) + e.what());
    }
    if (auto alt = parse_double(f[9])) fix.alt = *alt;
    fix.quality = gga_quality(*q);
    append_fix(result.fixes, fix, line_no);
  }
  return result;
}

}  // namespace

EmiParseResult parse_emi_log(std::istream& in) { return parse_emi_impl(in, nullptr); }

bool nmea_checksum_ok(std::string_view sentence) {
  sentence = trim(sentence);
  if (sentence.size() < 4 || sentence.front() != '$') return false;
  const auto star = sentence.rfind('*');
  if (star == std::string_view::npos || star + 3 != sentence.size()) return false;
  unsigned char sum = 0;
  for (std::size_t i = 1; i < star; ++i) sum ^= static_cast<unsigned char>(sentence[i]);
  unsigned value = 0;
  for (std::size_t i = star + 1; i < sentence.size(); ++i) {
    const char c = sentence[i];
    value <<= 4;
    if (c >= '0' && c <= '9') value |= static_cast<unsigned>(c - '0');
    else if (c >= 'A' && c <= 'F') value |= static_cast<unsigned>(c - 'A' + 10);
    else if (c >= 'a' && c <= 'f') value |= static_cast<unsigned>(c - 'a' + 10);
    else return false;
  }
  return value == sum;
}

GnssParseResult parse_gnss_track(std::istream& in, GnssSchema schema, double day_epoch) {
  return schema == GnssSchema::csv_v1 ? parse_gnss_csv(in) : parse_gnss_nmea(in, day_epoch);
}

GeorefResult georeference(const std::vector<EcaSample>& samples,
                          const std::vector<GnssFix>& fixes, const GeorefOptions& options,
                          SurveyMetadata meta) {
  if (!(options.max_gap > 0.0)) throw InputError("max_gap must be positive");
  std::vector<GnssFix> usable;
  usable.reserve(fixes.size());
  for (const auto& f : fixes)
    if (!options.keep || options.keep(f)) usable.push_back(f);
  if (usable.empty()) throw InputError("georeference: no usable GNSS fixes");
  for (std::size_t i = 1; i < usable.size(); ++i)
    if (!(usable[i].t > usable[i - 1].t))
      throw InputError("georeference: fixes not strictly time-sorted at t=" +
                       format_double(usable[i].t));

  std::vector<EcaSample> ordered = samples;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const EcaSample& a, const EcaSample& b) { return a.t < b.t; });

  GeorefResult result;
  result.track.meta = std::move(meta);
  const auto by_time = [](double t, const GnssFix& f) { return t < f.t; };
  for (const auto& sample : ordered) {
    if (sample.t < usable.front().t || sample.t > usable.back().t) {
      ++result.dropped_outside;
      continue;
    }
    const auto hi = std::upper_bound(usable.begin(), usable.end(), sample.t, by_time);
    const auto lo = hi - 1;
    EcaSample out = sample;
    if (lo->t == sample.t) {
      out.position = lo->pos;
    } else {
      if (hi->t - lo->t > options.max_gap) {
        ++result.dropped_gap;
        continue;
      }
      const double w = (sample.t - lo->t) / (hi->t - lo->t);
      double dlon = hi->pos.lon - lo->pos.lon;
      if (dlon > 180.0) dlon -= 360.0;
      if (dlon < -180.0) dlon += 360.0;
      double lon = lo->pos.lon + w * dlon;
      if (lon >= 180.0) lon -= 360.0;
      if (lon < -180.0) lon += 360.0;
      out.position = geodesy::GeoCoord{lo->pos.lat + w * (hi->pos.lat - lo->pos.lat), lon};
    }
    result.track.samples.push_back(out);
  }
  if (result.track.samples.empty())
    throw EmptyResultError("georeference: all " + std::to_string(samples.size()) +
                           " samples dropped (" + std::to_string(result.dropped_outside) +
                           " outside fix coverage, " + std::to_string(result.dropped_gap) +
                           " in gaps)");
  return result;
}

void write_track_csv(std::ostream& out, const SurveyTrack& track) {
  const auto& m = track.meta;
  if (!m.field_id.empty()) out << "# field_id=" << m.field_id << '\n';
  out << "# depth_mode=" << format_double(m.depth_mode) << '\n';
  out << "# acquisition=" << (m.acquisition == Acquisition::manual ? "manual" : "robotized") << '\n';
  if (m.placement) {
    out << "# placement_d_b=" << format_double(m.placement->d_b) << '\n';
    out << "# placement_d_h=" << format_double(m.placement->d_h) << '\n';
  }
  out << "t_s,cond_mS_per_m,inphase_ppt,lat_deg,lon_deg\n";
  for (const auto& s : track.samples) {
    out << format_double(s.t) << ',' << format_double(s.conductivity) << ',';
    if (s.inphase) out << format_double(*s.inphase);
    out << ',';
    if (s.position) out << format_double(s.position->lat) << ',' << format_double(s.position->lon);
    else out << ',';
    out << '\n';
  }
}

SurveyTrack read_track_csv(std::istream& in) {
  SurveyTrack track;
  auto parsed = parse_emi_impl(in, &track.meta);
  track.samples = std::move(parsed.samples);
  for (std::size_t i = 0; i < track.samples.size(); ++i)
    if (!track.samples[i].position)
      throw InputError("track row " + std::to_string(i + 1) + " has no position");
  validate(track);
  return track;
}

}  // namespace ecasurvey
