// SPDX-License-Identifier: Apache-2.0
/*
 * geostat.hpp
 *
 * Empirical semivariogram (Matheron estimator), weighted least-squares fit of
 * the exponential model, and ordinary kriging onto a raster.
 *
 * The exponential model uses the practical-range form
 *
 *     gamma(h) = nugget + partial_sill * (1 - exp(-3 h / range)),  h > 0
 *     gamma(0) = 0
 *
 * so `range` is the distance at which ~95% of the sill is reached. Note the
 * factor 3: libraries using exp(-h / a) report a range three times smaller.
 */
#ifndef ECASURVEY_GEOSTAT_HPP
#define ECASURVEY_GEOSTAT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ecasurvey/ingest.hpp"
#include "ecasurvey/raster.hpp"
#include "ecasurvey/stats.hpp"

namespace ecasurvey::geostat {

/// Sample projected to planar UTM metres.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;  ///< conductivity, mS/m
};

struct PlanarTrack {
  geodesy::UtmZone zone;
  std::vector<PlanarPoint> points;  ///< acquisition order
};

/// Projects every sample into the zone of the first sample.
PlanarTrack project_track(const SurveyTrack& track);

struct VariogramBin {
  double lag_center = 0.0;  ///< mean pair separation in the bin, m
  double gamma = 0.0;
  std::size_t pair_count = 0;
};

struct EmpiricalVariogram {
  std::vector<VariogramBin> bins;
  double lag_width = 0.0;
  double max_lag = 0.0;
};

/// Matheron estimator: pairs with separation h <= max_lag fall into bin
/// floor(h / lag_width); gamma = sum (z_i - z_j)^2 / (2 N). Empty bins are
/// omitted. A bin's lag_center is the mean separation of its pairs.
EmpiricalVariogram empirical_variogram(std::span<const PlanarPoint> points,
                                       double lag_width, double max_lag);
EmpiricalVariogram empirical_variogram(const SurveyTrack& track, double lag_width,
                                       double max_lag);

struct VariogramModel {
  double nugget = 0.0;
  double partial_sill = 0.0;
  double range = 1.0;
  bool degenerate = false;  ///< nugget-only fallback for an all-zero variogram

  double sill() const { return nugget + partial_sill; }
  /// Semivariance at separation h (0 at h == 0).
  double gamma(double h) const;
};

void validate(const VariogramModel& m);

struct FitOptions {
  double rel_tol = 1e-6;       ///< relative parameter step at convergence
  int max_iterations = 20000;  ///< Nelder-Mead iterations per restart
};

/// Weighted least squares with Cressie weights N_k / gamma(h_k)^2.
/// A coarse grid over (nugget, sill, range) seeds a bounded Nelder-Mead
/// refinement. Needs >= 3 bins. An all-zero variogram returns the degenerate
/// model (0, 0, max_lag).
VariogramModel fit_exponential(const EmpiricalVariogram& ev, const FitOptions& options = {});

/// Weighted objective minimised by fit_exponential.
double cressie_objective(const EmpiricalVariogram& ev, const VariogramModel& m);

struct Neighborhood {
  std::size_t k_nearest = 16;
  double max_radius = 0.0;  ///< metres
};

/// k = 16, radius = 10 x median nearest-neighbour spacing.
Neighborhood default_neighborhood(std::span<const PlanarPoint> points);

/// Cell size = median along-track spacing unless `cell_size` > 0, extent =
/// bounding box padded by two cells on every side.
GridSpec default_grid(const PlanarTrack& track, double cell_size = 0.0);

/// Averages z over points with bit-identical coordinates. Order of first
/// occurrence is preserved.
std::vector<PlanarPoint> deduplicate(std::span<const PlanarPoint> points);

struct KrigingPrediction {
  double value = 0.0;
  std::vector<std::size_t> neighbors;  ///< indices into the deduplicated points
  std::vector<double> weights;
  double lagrange = 0.0;
};

struct KrigingResult {
  RasterGrid raster;
  double max_weight_sum_error = 0.0;  ///< max over cells of |sum w - 1|
  std::size_t predicted_cells = 0;
};

/// Ordinary kriging at a single location over the deduplicated points.
/// Returns nullopt when no point lies within the radius.
std::optional<KrigingPrediction> krige_at(std::span<const PlanarPoint> unique_points,
                                          const VariogramModel& model, double x, double y,
                                          const Neighborhood& nb);

/// Ordinary kriging onto every cell centre of `grid`. Cells without
/// neighbours within the radius get nodata. Cells are solved in parallel with
/// `threads` workers (0 = hardware concurrency); output does not depend on
/// the thread count. Throws NumericalError naming the cell on a singular
/// system.
KrigingResult ordinary_kriging(std::span<const PlanarPoint> points,
                               const VariogramModel& model, const GridSpec& grid,
                               const Neighborhood& nb, unsigned threads = 0);
KrigingResult ordinary_kriging(const SurveyTrack& track, const VariogramModel& model,
                               const GridSpec& grid, const Neighborhood& nb,
                               unsigned threads = 0);

struct RasterCorrelation {
  double r = 0.0;
  std::size_t overlap = 0;
};

/// Pearson coefficient over cells that are data in both grids.
/// Throws InputError on geometry mismatch or fewer than 2 overlapping cells.
RasterCorrelation raster_pearson(const RasterGrid& a, const RasterGrid& b);

/// Summary statistics over non-nodata cells plus min/max.
struct MapStats {
  SummaryStats stats;
  double min = 0.0;
  double max = 0.0;
};
MapStats map_stats(const RasterGrid& r);

/// Smooth stationary random field built from a fixed set of random Fourier
/// modes; deterministic for a seed. Variance of the field is `variance`.
class SyntheticField {
 public:
  SyntheticField(std::uint64_t seed, double mean, double variance,
                 double correlation_length, std::size_t modes = 64);
  double operator()(double x, double y) const;
  double mean() const { return mean_; }
  double variance() const { return variance_; }

 private:
  struct Mode {
    double kx, ky, phase;
  };
  double mean_;
  double variance_;
  double amplitude_;
  std::vector<Mode> modes_;
};

/// Draws one realisation of a Gaussian field with exponential covariance at
/// the given locations (dense Cholesky, suitable for a few thousand points).
std::vector<double> simulate_exponential_field(std::span<const PlanarPoint> locations,
                                               const VariogramModel& model,
                                               std::uint64_t seed);

}  // namespace ecasurvey::geostat

#endif  // ECASURVEY_GEOSTAT_HPP
