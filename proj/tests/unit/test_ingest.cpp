// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ecasurvey/error.hpp"
#include "ecasurvey/ingest.hpp"
#include "ecasurvey/rng.hpp"

using namespace ecasurvey;

namespace {

std::string with_checksum(const std::string& body) {
  unsigned char sum = 0;
  for (char c : body) sum ^= static_cast<unsigned char>(c);
  char hex[3];
  std::snprintf(hex, sizeof hex, "%02X", sum);
  return "$" + body + "*" + hex;
}

EmiParseResult emi(const std::string& text) {
  std::istringstream in(text);
  return parse_emi_log(in);
}

GnssParseResult gnss(const std::string& text, GnssSchema schema = GnssSchema::csv_v1, double day = 0.0) {
  std::istringstream in(text);
  return parse_gnss_track(in, schema, day);
}

GnssFix fix(double t, double lat, double lon, FixQuality q = FixQuality::rtk_fixed) {
  GnssFix f;
  f.t = t;
  f.pos = {lat, lon};
  f.quality = q;
  return f;
}

EcaSample sample(double t, double c = 10.0) {
  EcaSample s;
  s.t = t;
  s.conductivity = c;
  return s;
}

}  // namespace

TEST_SUITE("ingest") {
  TEST_CASE("EMI row maps fields directly") {
    const auto r = emi("t_s,cond_mS_per_m,inphase_ppt\n100.0,13.9,0.2\n");
    REQUIRE(r.samples.size() == 1);
    CHECK(r.samples[0].t == 100.0);
    CHECK(r.samples[0].conductivity == 13.9);
    REQUIRE(r.samples[0].inphase);
    CHECK(*r.samples[0].inphase == 0.2);
    CHECK_FALSE(r.samples[0].position);
    CHECK(r.warnings.empty());
  }

  TEST_CASE("negative conductivity is data") {
    const auto r = emi("t_s,cond_mS_per_m,inphase_ppt\n1,-17.8,\n2,-2,0.1\n");
    REQUIRE(r.samples.size() == 2);
    CHECK(r.samples[0].conductivity == -17.8);
    CHECK_FALSE(r.samples[0].inphase);
  }

  TEST_CASE("empty data section and comments") {
    CHECK(emi("t_s,cond_mS_per_m,inphase_ppt\n").samples.empty());
    const auto r = emi("# logger v2\nt_s,cond_mS_per_m,inphase_ppt\n# note\n\n5,1,2\n");
    CHECK(r.samples.size() == 1);
  }

  TEST_CASE("EMI schema violations name the line") {
    auto message = [](const std::string& text) {
      try {
        emi(text);
      } catch (const InputError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message("t_s,cond_mS_per_m\n1,2\n").find("inphase_ppt") != std::string::npos);
    CHECK(message("t_s,cond_mS_per_m,inphase_ppt,speed\n1,2,3,4\n").find("speed") != std::string::npos);
    CHECK(message("t_s,cond_mS_per_m,inphase_ppt\n1,2,3\n2,abc,3\n").find("line 3") != std::string::npos);
    CHECK(message("t_s,cond_mS_per_m,inphase_ppt\n1,2\n").find("line 2") != std::string::npos);
    CHECK(message("t_s,cond_mS_per_m,inphase_ppt\n1,nan,0\n").find("line 2") != std::string::npos);
  }

  TEST_CASE("non-monotone EMI timestamps only warn") {
    const auto r = emi("t_s,cond_mS_per_m,inphase_ppt\n2,1,0\n1,1,0\n");
    CHECK(r.samples.size() == 2);
    CHECK(r.samples[0].t == 2.0);
    CHECK(r.warnings.size() == 1);
  }

  TEST_CASE("GNSS csv row maps to a fix") {
    const auto r = gnss("t_s,lat_deg,lon_deg,alt_m,fix_quality\n100.0,33.9727,-117.3204,310.0,rtk_fixed\n");
    REQUIRE(r.fixes.size() == 1);
    CHECK(r.fixes[0].t == 100.0);
    CHECK(r.fixes[0].pos.lat == 33.9727);
    CHECK(r.fixes[0].pos.lon == -117.3204);
    REQUIRE(r.fixes[0].alt);
    CHECK(*r.fixes[0].alt == 310.0);
    CHECK(r.fixes[0].quality == FixQuality::rtk_fixed);
  }

  TEST_CASE("GNSS fixes out of time order are an error naming both timestamps") {
    try {
      gnss("t_s,lat_deg,lon_deg,alt_m,fix_quality\n5,33,-117,,single\n4,33,-117,,single\n");
      FAIL("expected InputError");
    } catch (const InputError& e) {
      const std::string m = e.what();
      CHECK(m.find("t=4") != std::string::npos);
      CHECK(m.find("t=5") != std::string::npos);
    }
  }

  TEST_CASE("GNSS csv rejects bad coordinates and qualities") {
    CHECK_THROWS_AS(gnss("t_s,lat_deg,lon_deg,alt_m,fix_quality\n1,95,-117,,single\n"), InputError);
    CHECK_THROWS_AS(gnss("t_s,lat_deg,lon_deg,alt_m,fix_quality\n1,33,x,,single\n"), InputError);
    CHECK_THROWS_AS(gnss("t_s,lat_deg,lon_deg,alt_m,fix_quality\n1,33,-117,,great\n"), InputError);
  }

  TEST_CASE("NMEA GGA parsing with checksum validation") {
    const std::string good = with_checksum("GPGGA,120000.00,3358.36560,N,11719.22622,W,4,12,0.8,310.0,M,-32.0,M,1.0,0000");
    const std::string good2 = with_checksum("GPGGA,120000.10,3358.36561,N,11719.22623,W,5,12,0.8,310.0,M,-32.0,M,1.0,0000");
    std::string bad = with_checksum("GPGGA,120000.20,3358.36562,N,11719.22624,W,4,12,0.8,310.0,M,-32.0,M,1.0,0000");
    bad[bad.size() - 1] = bad[bad.size() - 1] == '0' ? '1' : '0';
    const std::string rmc = with_checksum("GPRMC,120000.30,A,3358.36563,N,11719.22625,W,0.1,0.0,010124,,,A");
    const auto r = gnss(good + "\n" + good2 + "\r\n" + bad + "\n" + rmc + "\n", GnssSchema::nmea_gga, 86400.0);
    REQUIRE(r.fixes.size() == 2);
    CHECK(r.skipped_checksum == 1);
    CHECK(r.skipped_other == 1);
    CHECK(r.fixes[0].t == doctest::Approx(86400.0 + 43200.0));
    CHECK(r.fixes[0].pos.lat == doctest::Approx(33.0 + 58.36560 / 60.0).epsilon(1e-12));
    CHECK(r.fixes[0].pos.lon == doctest::Approx(-(117.0 + 19.22622 / 60.0)).epsilon(1e-12));
    CHECK(r.fixes[0].quality == FixQuality::rtk_fixed);
    CHECK(r.fixes[1].quality == FixQuality::rtk_float);
    CHECK(nmea_checksum_ok(good));
    CHECK_FALSE(nmea_checksum_ok(bad));
  }

  TEST_CASE("NMEA midnight rollover keeps time increasing") {
    const std::string a = with_checksum("GPGGA,235959.90,3358.0,N,11719.0,W,4,12,0.8,310.0,M,-32.0,M,,");
    const std::string b = with_checksum("GPGGA,000000.00,3358.0,N,11719.0,W,4,12,0.8,310.0,M,-32.0,M,,");
    const auto r = gnss(a + "\n" + b + "\n", GnssSchema::nmea_gga);
    REQUIRE(r.fixes.size() == 2);
    CHECK(r.fixes[1].t == doctest::Approx(86400.0));
    CHECK(r.fixes[1].t > r.fixes[0].t);
  }

  TEST_CASE("georeference interpolates between bracketing fixes") {
    const std::vector<GnssFix> fixes{fix(1.0, 33.0, -117.0), fix(2.0, 33.0001, -117.0)};
    const auto r = georeference({sample(1.5)}, fixes);
    REQUIRE(r.track.samples.size() == 1);
    CHECK(r.track.samples[0].position->lat == doctest::Approx(33.00005).epsilon(1e-13));
    CHECK(r.track.samples[0].position->lon == -117.0);
  }

  TEST_CASE("a sample at a fix time takes that fix's position") {
    const std::vector<GnssFix> fixes{fix(1.0, 33.0, -117.0), fix(2.0, 33.0001, -117.0002), fix(3.0, 33.0003, -117.0)};
    const auto r = georeference({sample(2.0), sample(1.0), sample(3.0)}, fixes);
    REQUIRE(r.track.samples.size() == 3);
    CHECK(r.track.samples[0].position->lat == 33.0);
    CHECK(r.track.samples[1].position->lat == 33.0001);
    CHECK(r.track.samples[1].position->lon == -117.0002);
    CHECK(r.track.samples[2].position->lat == 33.0003);
  }

  TEST_CASE("samples outside coverage or inside a gap are dropped and counted") {
    const std::vector<GnssFix> fixes{fix(0.0, 33.0, -117.0), fix(1.0, 33.0, -117.0), fix(2.0, 33.0, -117.0),
                                     fix(5.0, 33.0, -117.0)};
    const auto r = georeference({sample(10.0), sample(0.5), sample(3.0)}, fixes, {.max_gap = 1.0});
    CHECK(r.track.samples.size() == 1);
    CHECK(r.dropped_outside == 1);
    CHECK(r.dropped_gap == 1);
    CHECK(r.dropped() + r.track.samples.size() == 3);
    CHECK_THROWS_AS(georeference({sample(10.0)}, fixes), EmptyResultError);
    CHECK_THROWS_AS(georeference({sample(1.0)}, {}), InputError);
  }

  TEST_CASE("fix filtering follows the predicate") {
    const std::vector<GnssFix> fixes{fix(0.0, 33.0, -117.0, FixQuality::single), fix(1.0, 33.0, -117.0),
                                     fix(2.0, 33.0, -117.0)};
    const auto strict = georeference({sample(0.5), sample(1.5)}, fixes);
    CHECK(strict.track.samples.size() == 1);
    GeorefOptions loose;
    loose.keep = [](const GnssFix&) { return true; };
    CHECK(georeference({sample(0.5), sample(1.5)}, fixes, loose).track.samples.size() == 2);
  }

  TEST_CASE("positions never leave the bracketing segment") {
    Rng rng(21);
    std::vector<GnssFix> fixes;
    double lat = 33.97, lon = -117.32;
    for (int i = 0; i <= 200; ++i) {
      fixes.push_back(fix(0.1 * i, lat, lon));
      lat += rng.uniform(-2e-6, 2e-6);
      lon += rng.uniform(-2e-6, 2e-6);
    }
    std::vector<EcaSample> samples;
    for (int i = 0; i < 500; ++i) samples.push_back(sample(rng.uniform(0.0, 20.0)));
    const auto r = georeference(samples, fixes);
    CHECK(r.dropped() + r.track.samples.size() == samples.size());
    for (const auto& s : r.track.samples) {
      auto k = static_cast<std::size_t>(std::floor(s.t / 0.1 + 1e-9));
      k = std::min<std::size_t>(k, fixes.size() - 2);
      const auto& a = fixes[k].pos;
      const auto& b = fixes[k + 1].pos;
      REQUIRE(s.position->lat >= std::min(a.lat, b.lat) - 1e-12);
      REQUIRE(s.position->lat <= std::max(a.lat, b.lat) + 1e-12);
      REQUIRE(s.position->lon >= std::min(a.lon, b.lon) - 1e-12);
      REQUIRE(s.position->lon <= std::max(a.lon, b.lon) + 1e-12);
    }
  }

  TEST_CASE("track csv round trip is lossless") {
    Rng rng(4);
    SurveyTrack track;
    track.meta.field_id = "olive grove";
    track.meta.placement = PlacementConfig{0.6, 0.06};
    track.meta.depth_mode = 0.35;
    track.meta.acquisition = Acquisition::manual;
    for (int i = 0; i < 50; ++i) {
      EcaSample s;
      s.t = 1.7e9 + i;
      s.conductivity = rng.normal(20.0, 5.0);
      if (i % 3) s.inphase = rng.normal();
      s.position = geodesy::GeoCoord{33.97 + rng.uniform() * 1e-3, -117.32 + rng.uniform() * 1e-3};
      track.samples.push_back(s);
    }
    std::stringstream ss;
    write_track_csv(ss, track);
    const auto back = read_track_csv(ss);
    CHECK(back.meta.field_id == track.meta.field_id);
    REQUIRE(back.meta.placement);
    CHECK(*back.meta.placement == *track.meta.placement);
    CHECK(back.meta.depth_mode == 0.35);
    CHECK(back.meta.acquisition == Acquisition::manual);
    REQUIRE(back.samples.size() == track.samples.size());
    for (std::size_t i = 0; i < track.samples.size(); ++i) {
      CHECK(back.samples[i].t == track.samples[i].t);
      CHECK(back.samples[i].conductivity == track.samples[i].conductivity);
      CHECK(back.samples[i].inphase == track.samples[i].inphase);
      CHECK(back.samples[i].position->lat == track.samples[i].position->lat);
      CHECK(back.samples[i].position->lon == track.samples[i].position->lon);
    }
  }

  TEST_CASE("track validation") {
    SurveyTrack t;
    t.samples.push_back(sample(1.0));
    CHECK_THROWS_AS(validate(t), InputError);
    t.samples[0].position = geodesy::GeoCoord{33.0, -117.0};
    CHECK_NOTHROW(validate(t));
    t.meta.depth_mode = 0.5;
    CHECK_THROWS_AS(validate(t), InputError);
  }
}
