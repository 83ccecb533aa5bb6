// SPDX-License-Identifier: Apache-2.0
/*
 * terrasim.hpp
 *
 * Quasi-static terrain traversal: at each step the robot rests on the
 * least-squares plane through its four wheel contacts, and the probe's
 * clearance is read as a range along the body's down axis.
 *
 * No dynamics are modelled (no suspension, inertia, or slip), so the probe
 * height d_h only shifts the flat-ground clearance.
 */
#ifndef ECASURVEY_TERRASIM_HPP
#define ECASURVEY_TERRASIM_HPP

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "ecasurvey/geodesy.hpp"
#include "ecasurvey/placement.hpp"
#include "ecasurvey/stats.hpp"

namespace ecasurvey::terrasim {

/// Elevation samples on a regular grid; node (col, row) sits at
/// (origin.x + col * cell_size, origin.y + row * cell_size), row 0 southmost.
/// Elevation between nodes is bilinear.
class Heightmap {
 public:
  Heightmap() = default;
  Heightmap(std::size_t ncols, std::size_t nrows, double cell_size,
            geodesy::LocalXY origin, std::vector<double> elevations);

  /// Constant-elevation map.
  static Heightmap flat(std::size_t ncols, std::size_t nrows, double cell_size,
                        double elevation = 0.0, geodesy::LocalXY origin = {});

  std::size_t ncols() const { return ncols_; }
  std::size_t nrows() const { return nrows_; }
  double cell_size() const { return cell_size_; }
  geodesy::LocalXY origin() const { return origin_; }
  double width() const { return static_cast<double>(ncols_ - 1) * cell_size_; }
  double height() const { return static_cast<double>(nrows_ - 1) * cell_size_; }

  double at(std::size_t col, std::size_t row) const { return z_[row * ncols_ + col]; }
  double& at(std::size_t col, std::size_t row) { return z_[row * ncols_ + col]; }
  const std::vector<double>& elevations() const { return z_; }

  bool contains(double x, double y) const;
  /// Bilinear elevation. Throws InputError outside the extent.
  double elevation(double x, double y) const;

 private:
  std::size_t ncols_ = 0;
  std::size_t nrows_ = 0;
  double cell_size_ = 1.0;
  geodesy::LocalXY origin_;
  std::vector<double> z_;
};

/// Chassis geometry, metres. Defaults follow the Jackal UGV
/// (0.508 x 0.432 x 0.254 m body, 0.262 m wheelbase).
struct RobotGeometry {
  double wheelbase = 0.262;
  double track_width = 0.376;
  double chassis_length = 0.508;
  double mount_height = 0.254;  ///< probe mount above the contact plane
};

void validate(const RobotGeometry& geom);

struct Pose {
  double z = 0.0;      ///< contact-plane height at the footprint centroid
  double roll = 0.0;   ///< rad, positive when the left side is higher
  double pitch = 0.0;  ///< rad, positive nose-up
  double heading = 0.0;
  double x = 0.0;
  double y = 0.0;
  double slope_forward = 0.0;  ///< tan(pitch)
  double slope_left = 0.0;     ///< tan(roll)
};

/// Fits the least-squares plane through the four wheel contacts.
/// Throws InputError when a contact lies outside the heightmap.
Pose robot_pose_on_terrain(const Heightmap& h, double x, double y, double heading,
                           const RobotGeometry& geom);

/// Probe clearance in metres: distance from the probe tip to the terrain
/// along the body's down axis. The tip sits chassis_length/2 + d_b ahead of
/// the footprint centroid and d_h above the contact plane.
double probe_clearance(const Pose& pose, const RobotGeometry& geom,
                       const PlacementConfig& cfg, const Heightmap& h);

struct Trajectory {
  std::vector<geodesy::LocalXY> waypoints;
};

void validate(const Trajectory& traj);

/// Probe clearance deviations (clearance - d_h) aggregated over a traverse.
/// Lengths in centimetres.
struct OscillationReport {
  double mean_dev = 0.0;
  double sigma_dev = 0.0;     ///< n-1 standard deviation
  double variance_dev = 0.0;  ///< sigma_dev squared, cm^2
  double min_clearance = 0.0;
  std::size_t collision_count = 0;  ///< steps with clearance <= 0
  std::size_t n_steps = 0;
};

struct ClearanceSample {
  double s = 0.0;          ///< arc length, m
  double clearance = 0.0;  ///< m
};

struct TraverseResult {
  OscillationReport report;
  std::vector<ClearanceSample> series;
};

/// Advances along the polyline at a fixed arc-length step with heading
/// tangent to the current segment, recording probe clearance at each step.
TraverseResult simulate_traverse(const Heightmap& h, const Trajectory& traj,
                                 const RobotGeometry& geom, const PlacementConfig& cfg,
                                 double step);

/// Aggregates a clearance series for a probe whose flat-ground clearance is
/// d_h. Requires at least two samples.
OscillationReport summarize_clearance(const std::vector<ClearanceSample>& series,
                                      double d_h);

enum class TerrainKind { smooth, rocky, mixed };

const char* to_string(TerrainKind kind);
TerrainKind parse_terrain_kind(std::string_view text);

/// Synthetic terrain shape. Amplitudes bound the absolute elevation of each
/// component.
struct TerrainParams {
  double smooth_amplitude = 0.03;      ///< m, low-frequency undulation bound
  double smooth_wavelength_min = 3.0;  ///< m
  double smooth_wavelength_max = 10.0;
  double rough_amplitude = 0.07;       ///< m, high-frequency bump bound
  double rough_wavelength_min = 0.2;
  double rough_wavelength_max = 0.5;
  double blend_wavelength = 12.0;      ///< m, rocky/smooth patch scale for `mixed`
};

/// Deterministic synthetic terrain of `width` x `height` metres with the
/// origin at (0, 0).
Heightmap synth_heightmap(TerrainKind kind, std::uint64_t seed, double width,
                          double height, double cell_size,
                          const TerrainParams& params = {});

/// Default planned trajectory for each terrain kind inside a
/// `width` x `height` map (6, 8 and 13 waypoints respectively).
Trajectory default_trajectory(TerrainKind kind, double width, double height);

/// Heightmaps use the ESRI ASCII grid format (cell centres are nodes).
Heightmap read_heightmap_asc(std::istream& in);
void write_heightmap_asc(std::ostream& out, const Heightmap& h);

/// Trajectory csv: header x_m,y_m.
Trajectory read_trajectory_csv(std::istream& in);
void write_clearance_csv(std::ostream& out, const std::vector<ClearanceSample>& series);

struct SweepEntry {
  PlacementConfig cfg;
  OscillationReport report;
};

/// Runs simulate_traverse for every (d_b, d_h) combination, d_b-major.
std::vector<SweepEntry> sweep_placements(const Heightmap& h, const Trajectory& traj,
                                         const RobotGeometry& geom,
                                         const std::vector<double>& d_b_values,
                                         const std::vector<double>& d_h_values,
                                         double step);

inline const std::vector<double> kSweepDistances{0.40, 0.50, 0.60, 0.70};
inline const std::vector<double> kSweepHeights{0.06, 0.11};

}  // namespace ecasurvey::terrasim

#endif  // ECASURVEY_TERRASIM_HPP
