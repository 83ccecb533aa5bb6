// SPDX-License-Identifier: Apache-2.0
#include "ecasurvey/terrasim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "ecasurvey/error.hpp"
#include "ecasurvey/raster.hpp"
#include "ecasurvey/rng.hpp"
#include "util.hpp"

namespace ecasurvey::terrasim {

namespace {

// a + t (b - a) returns a exactly when a == b, which keeps flat maps flat.
double lerp(double a, double b, double t) { return a + t * (b - a); }

}  // namespace

Heightmap::Heightmap(std::size_t ncols, std::size_t nrows, double cell_size,
                     geodesy::LocalXY origin, std::vector<double> elevations)
    : ncols_(ncols), nrows_(nrows), cell_size_(cell_size), origin_(origin), z_(std::move(elevations)) {
  if (ncols < 2 || nrows < 2) throw InputError("heightmap needs at least 2 x 2 nodes");
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw InputError("heightmap cell size must be positive");
  if (z_.size() != ncols * nrows)
    throw InputError("heightmap holds " + std::to_string(z_.size()) + " values, expected " +
                     std::to_string(ncols * nrows));
  for (double z : z_)
    if (!std::isfinite(z)) throw InputError("heightmap elevations must be finite");
}

Heightmap Heightmap::flat(std::size_t ncols, std::size_t nrows, double cell_size, double elevation,
                          geodesy::LocalXY origin) {
  return Heightmap(ncols, nrows, cell_size, origin, std::vector<double>(ncols * nrows, elevation));
}

bool Heightmap::contains(double x, double y) const {
  constexpr double eps = 1e-9;
  const double u = (x - origin_.x) / cell_size_;
  const double v = (y - origin_.y) / cell_size_;
  return u >= -eps && v >= -eps && u <= static_cast<double>(ncols_ - 1) + eps &&
         v <= static_cast<double>(nrows_ - 1) + eps;
}

double Heightmap::elevation(double x, double y) const {
  if (!contains(x, y))
    throw InputError("point (" + std::to_string(x) + ", " + std::to_string(y) +
                     ") outside the heightmap extent");
  const double u = std::clamp((x - origin_.x) / cell_size_, 0.0, static_cast<double>(ncols_ - 1));
  const double v = std::clamp((y - origin_.y) / cell_size_, 0.0, static_cast<double>(nrows_ - 1));
  const auto i = std::min(static_cast<std::size_t>(u), ncols_ - 2);
  const auto j = std::min(static_cast<std::size_t>(v), nrows_ - 2);
  const double fx = u - static_cast<double>(i);
  const double fy = v - static_cast<double>(j);
  const double south = lerp(at(i, j), at(i + 1, j), fx);
  const double north = lerp(at(i, j + 1), at(i + 1, j + 1), fx);
  return lerp(south, north, fy);
}

void validate(const RobotGeometry& g) {
  if (!(g.wheelbase > 0.0) || !(g.track_width > 0.0) || !(g.chassis_length > 0.0) ||
      !(g.mount_height > 0.0))
    throw InputError("robot geometry dimensions must be positive");
}

Pose robot_pose_on_terrain(const Heightmap& h, double x, double y, double heading,
                           const RobotGeometry& geom) {
  validate(geom);
  const double fx = std::cos(heading), fy = std::sin(heading);
  const double lx = -fy, ly = fx;
  const double hw = 0.5 * geom.wheelbase, ht = 0.5 * geom.track_width;
  const auto contact = [&](double along, double side) {
    const double px = x + along * fx + side * lx;
    const double py = y + along * fy + side * ly;
    if (!h.contains(px, py))
      throw InputError("wheel contact (" + std::to_string(px) + ", " + std::to_string(py) +
                       ") outside the heightmap extent");
    return h.elevation(px, py);
  };
  const double z_fl = contact(hw, ht), z_fr = contact(hw, -ht);
  const double z_rl = contact(-hw, ht), z_rr = contact(-hw, -ht);

  // Least-squares plane z = a + b x' + c y' through the four corners of the
  // symmetric footprint has a closed form.
  Pose p;
  p.x = x;
  p.y = y;
  p.heading = heading;
  p.z = ((z_fl + z_fr) + (z_rl + z_rr)) / 4.0;
  p.slope_forward = ((z_fl + z_fr) - (z_rl + z_rr)) / (2.0 * geom.wheelbase);
  p.slope_left = ((z_fl + z_rl) - (z_fr + z_rr)) / (2.0 * geom.track_width);
  p.pitch = std::atan(p.slope_forward);
  p.roll = std::atan(p.slope_left);
  return p;
}

double probe_clearance(const Pose& pose, const RobotGeometry& geom, const PlacementConfig& cfg,
                       const Heightmap& h) {
  const double b = pose.slope_forward, c = pose.slope_left;
  // Body frame expressed in heading-aligned coordinates (x' forward, y' left, z up).
  const double nn = std::sqrt(1.0 + b * b + c * c);
  const double nx = -b / nn, ny = -c / nn, nz = 1.0 / nn;
  const double fn = std::sqrt(1.0 + b * b);
  const double lever = 0.5 * geom.chassis_length + cfg.d_b;
  // Tip relative to the contact-plane point under the footprint centroid.
  const double tx = lever / fn + cfg.d_h * nx;
  const double ty = cfg.d_h * ny;
  const double tz = lever * b / fn + cfg.d_h * nz;

  const double cf = std::cos(pose.heading), sf = std::sin(pose.heading);
  const auto ground_rel = [&](double px, double py) {
    const double wx = pose.x + px * cf - py * sf;
    const double wy = pose.y + px * sf + py * cf;
    if (!h.contains(wx, wy))
      throw InputError("probe projection (" + std::to_string(wx) + ", " + std::to_string(wy) +
                       ") outside the heightmap extent");
    return h.elevation(wx, wy) - pose.z;
  };

  // Range along -n: solve (tip - t n)_z = ground((tip - t n)_xy) for t.
  double t = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double r = (tz - t * nz) - ground_rel(tx - t * nx, ty - t * ny);
    if (r == 0.0) break;
    t += r / nz;
    if (std::abs(r) < 1e-13) break;
  }
  return t;
}

void validate(const Trajectory& traj) {
  if (traj.waypoints.size() < 2) throw InputError("trajectory needs at least 2 waypoints");
  for (std::size_t i = 0; i < traj.waypoints.size(); ++i) {
    const auto& w = traj.waypoints[i];
    if (!std::isfinite(w.x) || !std::isfinite(w.y)) throw InputError("trajectory waypoint is not finite");
    if (i > 0 && w.x == traj.waypoints[i - 1].x && w.y == traj.waypoints[i - 1].y)
      throw InputError("trajectory waypoints " + std::to_string(i - 1) + " and " + std::to_string(i) +
                       " coincide");
  }
}

OscillationReport summarize_clearance(const std::vector<ClearanceSample>& series, double d_h) {
  if (series.size() < 2) throw InputError("clearance series needs at least 2 samples");
  std::vector<double> dev_cm;
  dev_cm.reserve(series.size());
  OscillationReport r;
  r.min_clearance = series.front().clearance * 100.0;
  for (const auto& s : series) {
    dev_cm.push_back((s.clearance - d_h) * 100.0);
    r.min_clearance = std::min(r.min_clearance, s.clearance * 100.0);
    if (s.clearance <= 0.0) ++r.collision_count;
  }
  const auto st = column_stats(dev_cm);
  r.mean_dev = st.mean;
  r.sigma_dev = st.sigma;
  r.variance_dev = st.sigma * st.sigma;
  r.n_steps = series.size();
  return r;
}

TraverseResult simulate_traverse(const Heightmap& h, const Trajectory& traj, const RobotGeometry& geom,
                                 const PlacementConfig& cfg, double step) {
  validate(traj);
  validate(geom);
  validate(cfg);
  if (!(step > 0.0) || !std::isfinite(step)) throw InputError("traverse step must be positive");
  const auto& w = traj.waypoints;
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < w.size(); ++i)
    cum.push_back(cum.back() + std::hypot(w[i].x - w[i - 1].x, w[i].y - w[i - 1].y));
  const double total = cum.back();
  const auto n_steps = static_cast<std::size_t>(std::floor(total / step + 1e-9)) + 1;

  TraverseResult result;
  result.series.reserve(n_steps);
  const std::size_t last_seg = w.size() - 2;
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double s = std::min(static_cast<double>(k) * step, total);
    std::size_t seg = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), s) - cum.begin());
    seg = std::min(seg == 0 ? 0 : seg - 1, last_seg);
    const double len = cum[seg + 1] - cum[seg];
    const double f = (s - cum[seg]) / len;
    const double x = w[seg].x + f * (w[seg + 1].x - w[seg].x);
    const double y = w[seg].y + f * (w[seg + 1].y - w[seg].y);
    const double heading = std::atan2(w[seg + 1].y - w[seg].y, w[seg + 1].x - w[seg].x);
    const Pose pose = robot_pose_on_terrain(h, x, y, heading, geom);
    result.series.push_back({s, probe_clearance(pose, geom, cfg, h)});
  }
  if (result.series.size() < 2) throw InputError("trajectory shorter than one step");
  result.report = summarize_clearance(result.series, cfg.d_h);
  return result;
}

const char* to_string(TerrainKind kind) {
  switch (kind) {
    case TerrainKind::smooth: return "smooth";
    case TerrainKind::rocky: return "rocky";
    case TerrainKind::mixed: return "mixed";
  }
  return "smooth";
}

TerrainKind parse_terrain_kind(std::string_view text) {
  if (text == "smooth") return TerrainKind::smooth;
  if (text == "rocky") return TerrainKind::rocky;
  if (text == "mixed") return TerrainKind::mixed;
  throw InputError("unknown terrain kind '" + std::string(text) + "' (smooth, rocky, mixed)");
}

namespace {

struct Wave {
  double kx, ky, phase, weight;
};

// Plane waves with wavelengths in [lo, hi] whose weights sum to `amplitude`,
// so the superposition never exceeds it in magnitude.
std::vector<Wave> draw_waves(Rng& rng, std::size_t count, double lo, double hi, double amplitude) {
  std::vector<Wave> waves;
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double wavelength = rng.uniform(lo, hi);
    const double dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double k = 2.0 * std::numbers::pi / wavelength;
    Wave w{k * std::cos(dir), k * std::sin(dir), rng.uniform(0.0, 2.0 * std::numbers::pi),
           rng.uniform(0.5, 1.0)};
    total += w.weight;
    waves.push_back(w);
  }
  for (auto& w : waves) w.weight *= amplitude / total;
  return waves;
}

double superpose(const std::vector<Wave>& waves, double x, double y) {
  double z = 0.0;
  for (const auto& w : waves) z += w.weight * std::cos(w.kx * x + w.ky * y + w.phase);
  return z;
}

}  // namespace

Heightmap synth_heightmap(TerrainKind kind, std::uint64_t seed, double width, double height,
                          double cell_size, const TerrainParams& params) {
  if (!(width > 0.0) || !(height > 0.0) || !(cell_size > 0.0))
    throw InputError("synthetic terrain extent and cell size must be positive");
  if (params.smooth_amplitude < 0.0 || params.rough_amplitude < 0.0)
    throw InputError("terrain amplitudes must be non-negative");
  if (!(params.smooth_wavelength_min > 0.0) || params.smooth_wavelength_max < params.smooth_wavelength_min ||
      !(params.rough_wavelength_min > 0.0) || params.rough_wavelength_max < params.rough_wavelength_min ||
      !(params.blend_wavelength > 0.0))
    throw InputError("terrain wavelengths must be positive and ordered");
  const auto ncols = static_cast<std::size_t>(std::llround(width / cell_size)) + 1;
  const auto nrows = static_cast<std::size_t>(std::llround(height / cell_size)) + 1;
  if (ncols * nrows > 50'000'000) throw InputError("synthetic terrain too large");

  // Draw order is fixed so the smooth component is shared by all kinds.
  Rng rng(seed);
  const auto smooth = draw_waves(rng, 8, params.smooth_wavelength_min, params.smooth_wavelength_max,
                                 params.smooth_amplitude);
  const auto rough = draw_waves(rng, 24, params.rough_wavelength_min, params.rough_wavelength_max,
                                params.rough_amplitude);
  const double phase_x = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double phase_y = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double kb = 2.0 * std::numbers::pi / params.blend_wavelength;

  std::vector<double> z(ncols * nrows);
  for (std::size_t r = 0; r < nrows; ++r) {
    const double y = static_cast<double>(r) * cell_size;
    for (std::size_t c = 0; c < ncols; ++c) {
      const double x = static_cast<double>(c) * cell_size;
      double v = superpose(smooth, x, y);
      if (kind == TerrainKind::rocky) {
        v += superpose(rough, x, y);
      } else if (kind == TerrainKind::mixed) {
        const double blend = 0.5 + 0.5 * std::sin(kb * x + phase_x) * std::sin(kb * y + phase_y);
        v += blend * superpose(rough, x, y);
      }
      z[r * ncols + c] = v;
    }
  }
  return Heightmap(ncols, nrows, cell_size, {0.0, 0.0}, std::move(z));
}

Trajectory default_trajectory(TerrainKind kind, double width, double height) {
  // Waypoints as fractions of the map extent.
  static const std::vector<geodesy::LocalXY> kSmooth{
      {0.15, 0.20}, {0.30, 0.22}, {0.45, 0.21}, {0.60, 0.23}, {0.75, 0.22}, {0.85, 0.20}};
  static const std::vector<geodesy::LocalXY> kRocky{{0.15, 0.50}, {0.25, 0.52}, {0.35, 0.50},
                                                    {0.45, 0.52}, {0.55, 0.50}, {0.65, 0.52},
                                                    {0.75, 0.50}, {0.85, 0.52}};
  static const std::vector<geodesy::LocalXY> kMixed{
      {0.15, 0.15}, {0.40, 0.18}, {0.65, 0.15}, {0.85, 0.25}, {0.80, 0.40}, {0.55, 0.45}, {0.30, 0.42},
      {0.15, 0.55}, {0.20, 0.70}, {0.45, 0.75}, {0.70, 0.72}, {0.85, 0.80}, {0.80, 0.85}};
  const auto& frac = kind == TerrainKind::smooth ? kSmooth : kind == TerrainKind::rocky ? kRocky : kMixed;
  Trajectory t;
  for (const auto& f : frac) t.waypoints.push_back({f.x * width, f.y * height});
  return t;
}

Heightmap read_heightmap_asc(std::istream& in) {
  const RasterGrid r = read_esri_ascii(in);
  if (r.spec.ncols < 2 || r.spec.nrows < 2) throw InputError("heightmap needs at least 2 x 2 cells");
  std::vector<double> z(r.values.size());
  for (std::size_t row = 0; row < r.spec.nrows; ++row)
    for (std::size_t col = 0; col < r.spec.ncols; ++col) {
      const double v = r.at(col, row);
      if (r.is_nodata(v)) throw InputError("heightmap contains nodata cells");
      z[(r.spec.nrows - 1 - row) * r.spec.ncols + col] = v;
    }
  const double half = 0.5 * r.spec.cell_size;
  return Heightmap(r.spec.ncols, r.spec.nrows, r.spec.cell_size, {r.spec.xll + half, r.spec.yll + half},
                   std::move(z));
}

void write_heightmap_asc(std::ostream& out, const Heightmap& h) {
  RasterGrid r;
  r.spec.ncols = h.ncols();
  r.spec.nrows = h.nrows();
  r.spec.cell_size = h.cell_size();
  r.spec.xll = h.origin().x - 0.5 * h.cell_size();
  r.spec.yll = h.origin().y - 0.5 * h.cell_size();
  r.values.resize(h.elevations().size());
  for (std::size_t row = 0; row < h.nrows(); ++row)
    for (std::size_t col = 0; col < h.ncols(); ++col)
      r.values[row * h.ncols() + col] = h.at(col, h.nrows() - 1 - row);
  write_esri_ascii(out, r);
}

Trajectory read_trajectory_csv(std::istream& in) {
  Trajectory t;
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (detail::is_comment_or_blank(raw)) continue;
    const auto f = detail::split(detail::trim(raw));
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (!have_header) {
      if (f.size() != 2 || f[0] != "x_m" || f[1] != "y_m")
        throw InputError(where + "trajectory header must be x_m,y_m");
      have_header = true;
      continue;
    }
    if (f.size() != 2) throw InputError(where + "expected 2 fields");
    const auto x = detail::parse_double(f[0]);
    const auto y = detail::parse_double(f[1]);
    if (!x || !y) throw InputError(where + "bad waypoint");
    t.waypoints.push_back({*x, *y});
  }
  validate(t);
  return t;
}

void write_clearance_csv(std::ostream& out, const std::vector<ClearanceSample>& series) {
  out << "s_m,clearance_m\n";
  for (const auto& s : series) out << detail::format_double(s.s) << ',' << detail::format_double(s.clearance) << '\n';
}

std::vector<SweepEntry> sweep_placements(const Heightmap& h, const Trajectory& traj,
                                         const RobotGeometry& geom, const std::vector<double>& d_b_values,
                                         const std::vector<double>& d_h_values, double step) {
  std::vector<SweepEntry> out;
  for (double d_b : d_b_values)
    for (double d_h : d_h_values) {
      const PlacementConfig cfg{d_b, d_h};
      out.push_back({cfg, simulate_traverse(h, traj, geom, cfg, step).report});
    }
  return out;
}

}  // namespace ecasurvey::terrasim
