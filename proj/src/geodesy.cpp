// SPDX-License-Identifier: Apache-2.0
#include "ecasurvey/geodesy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "ecasurvey/error.hpp"

namespace ecasurvey::geodesy {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Krueger series coefficients to order n^6, with n the third flattening.
struct TmSeries {
  double e;   // first eccentricity
  double e2;
  double rect_radius;  // A, radius of the rectifying sphere
  std::array<double, 6> alpha;
  std::array<double, 6> beta;
};

TmSeries make_series() {
  const double f = kWgs84F;
  const double n = f / (2.0 - f);
  const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
  TmSeries s{};
  s.e2 = f * (2.0 - f);
  s.e = std::sqrt(s.e2);
  s.rect_radius = kWgs84A / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
  s.alpha = {
      n / 2.0 - 2.0 * n2 / 3.0 + 5.0 * n3 / 16.0 + 41.0 * n4 / 180.0 - 127.0 * n5 / 288.0 +
          7891.0 * n6 / 37800.0,
      13.0 * n2 / 48.0 - 3.0 * n3 / 5.0 + 557.0 * n4 / 1440.0 + 281.0 * n5 / 630.0 -
          1983433.0 * n6 / 1935360.0,
      61.0 * n3 / 240.0 - 103.0 * n4 / 140.0 + 15061.0 * n5 / 26880.0 +
          167603.0 * n6 / 181440.0,
      49561.0 * n4 / 161280.0 - 179.0 * n5 / 168.0 + 6601661.0 * n6 / 7257600.0,
      34729.0 * n5 / 80640.0 - 3418889.0 * n6 / 1995840.0,
      212378941.0 * n6 / 319334400.0,
  };
  s.beta = {
      n / 2.0 - 2.0 * n2 / 3.0 + 37.0 * n3 / 96.0 - n4 / 360.0 - 81.0 * n5 / 512.0 +
          96199.0 * n6 / 604800.0,
      n2 / 48.0 + n3 / 15.0 - 437.0 * n4 / 1440.0 + 46.0 * n5 / 105.0 -
          1118711.0 * n6 / 3870720.0,
      17.0 * n3 / 480.0 - 37.0 * n4 / 840.0 - 209.0 * n5 / 4480.0 + 5569.0 * n6 / 90720.0,
      4397.0 * n4 / 161280.0 - 11.0 * n5 / 504.0 - 830251.0 * n6 / 7257600.0,
      4583.0 * n5 / 161280.0 - 108847.0 * n6 / 3991680.0,
      20648693.0 * n6 / 638668800.0,
  };
  return s;
}

const TmSeries& series() {
  static const TmSeries s = make_series();
  return s;
}

// tan of the conformal latitude from tan of the geodetic latitude.
double conformal_tan(double tau, double e) {
  const double tau1 = std::hypot(1.0, tau);
  const double sig = std::sinh(e * std::atanh(e * tau / tau1));
  return std::hypot(1.0, sig) * tau - sig * tau1;
}

// Inverse of conformal_tan by Newton iteration.
double geodetic_tan(double taup, double e) {
  const double e2m = 1.0 - e * e;
  double tau = taup / e2m;
  for (int i = 0; i < 10; ++i) {
    const double taupa = conformal_tan(tau, e);
    const double dtau = (taup - taupa) * (1.0 + e2m * tau * tau) /
                        (e2m * std::hypot(1.0, tau) * std::hypot(1.0, taupa));
    tau += dtau;
    if (std::abs(dtau) < 1e-15 * std::max(1.0, std::abs(tau))) break;
  }
  return tau;
}

double normalize_lon(double lon) {
  double r = std::fmod(lon + 180.0, 360.0);
  if (r < 0.0) r += 360.0;
  return r - 180.0;
}

const char* hemi_name(Hemisphere h) { return h == Hemisphere::north ? "N" : "S"; }

}  // namespace

void validate(const GeoCoord& p) {
  if (!std::isfinite(p.lat) || !std::isfinite(p.lon))
    throw InputError("non-finite geographic coordinate");
  if (p.lat < -90.0 || p.lat > 90.0)
    throw InputError("latitude " + std::to_string(p.lat) + " outside [-90, 90]");
  if (p.lon < -180.0 || p.lon >= 180.0)
    throw InputError("longitude " + std::to_string(p.lon) + " outside [-180, 180)");
}

void validate(const UtmCoord& u) {
  if (u.zone < 1 || u.zone > 60) throw InputError("UTM zone " + std::to_string(u.zone) + " outside [1, 60]");
  if (!std::isfinite(u.easting) || !std::isfinite(u.northing))
    throw InputError("non-finite UTM coordinate");
  if (u.easting <= 0.0 || u.easting >= 1000000.0)
    throw InputError("UTM easting " + std::to_string(u.easting) + " outside (0, 1000000)");
  if (u.northing < 0.0 || u.northing > 10000000.0)
    throw InputError("UTM northing " + std::to_string(u.northing) + " outside [0, 10000000]");
}

double central_meridian(int zone) { return 6.0 * zone - 183.0; }

UtmZone zone_of(const GeoCoord& p) {
  validate(p);
  int zone = static_cast<int>(std::floor((p.lon + 180.0) / 6.0)) + 1;
  zone = std::clamp(zone, 1, 60);
  // Norway
  if (p.lat >= 56.0 && p.lat < 64.0 && p.lon >= 3.0 && p.lon < 12.0) zone = 32;
  // Svalbard
  if (p.lat >= 72.0 && p.lat < 84.0) {
    if (p.lon >= 0.0 && p.lon < 9.0) zone = 31;
    else if (p.lon >= 9.0 && p.lon < 21.0) zone = 33;
    else if (p.lon >= 21.0 && p.lon < 33.0) zone = 35;
    else if (p.lon >= 33.0 && p.lon < 42.0) zone = 37;
  }
  return {zone, p.lat >= 0.0 ? Hemisphere::north : Hemisphere::south};
}

UtmCoord wgs84_to_utm(const GeoCoord& p, const std::optional<UtmZone>& pinned) {
  validate(p);
  if (std::abs(p.lat) > kMaxAbsLatitude)
    throw InputError("latitude " + std::to_string(p.lat) + " outside the UTM band |lat| <= 84");
  const UtmZone z = pinned ? *pinned : zone_of(p);
  if (z.zone < 1 || z.zone > 60) throw InputError("UTM zone " + std::to_string(z.zone) + " outside [1, 60]");

  const TmSeries& s = series();
  const double lam = normalize_lon(p.lon - central_meridian(z.zone)) * kDeg;
  const double phi = p.lat * kDeg;

  const double taup = conformal_tan(std::tan(phi), s.e);
  const double xip = std::atan2(taup, std::cos(lam));
  const double etap = std::asinh(std::sin(lam) / std::hypot(taup, std::cos(lam)));

  double xi = xip;
  double eta = etap;
  for (int j = 1; j <= 6; ++j) {
    const double a = s.alpha[j - 1];
    xi += a * std::sin(2.0 * j * xip) * std::cosh(2.0 * j * etap);
    eta += a * std::cos(2.0 * j * xip) * std::sinh(2.0 * j * etap);
  }

  UtmCoord u;
  u.zone = z.zone;
  u.hemisphere = z.hemisphere;
  u.easting = kFalseEasting + kUtmK0 * s.rect_radius * eta;
  u.northing = kUtmK0 * s.rect_radius * xi;
  if (z.hemisphere == Hemisphere::south) u.northing += kFalseNorthingSouth;
  validate(u);
  return u;
}

GeoCoord utm_to_wgs84(const UtmCoord& u) {
  validate(u);
  const TmSeries& s = series();
  const double y =
      u.northing - (u.hemisphere == Hemisphere::south ? kFalseNorthingSouth : 0.0);
  const double xi = y / (kUtmK0 * s.rect_radius);
  const double eta = (u.easting - kFalseEasting) / (kUtmK0 * s.rect_radius);

  double xip = xi;
  double etap = eta;
  for (int j = 1; j <= 6; ++j) {
    const double b = s.beta[j - 1];
    xip -= b * std::sin(2.0 * j * xi) * std::cosh(2.0 * j * eta);
    etap -= b * std::cos(2.0 * j * xi) * std::sinh(2.0 * j * eta);
  }

  const double taup = std::sin(xip) / std::hypot(std::sinh(etap), std::cos(xip));
  const double lam = std::atan2(std::sinh(etap), std::cos(xip));
  const double tau = geodetic_tan(taup, s.e);

  GeoCoord p;
  p.lat = std::atan(tau) / kDeg;
  p.lon = normalize_lon(central_meridian(u.zone) + lam / kDeg);
  return p;
}

LocalXY utm_to_local(const UtmCoord& u, const UtmCoord& origin) {
  if (u.zone != origin.zone || u.hemisphere != origin.hemisphere)
    throw InputError("zone mismatch: point in " + std::to_string(u.zone) + hemi_name(u.hemisphere) +
                     ", origin in " + std::to_string(origin.zone) + hemi_name(origin.hemisphere));
  return {u.easting - origin.easting, u.northing - origin.northing};
}

}  // namespace ecasurvey::geodesy
