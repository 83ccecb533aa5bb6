// SPDX-License-Identifier: Apache-2.0
/*
 * compare.hpp
 *
 * Survey-to-survey comparison of two passes over the same path: sigma
 * trimming, arc-length alignment, polynomial trends, and correlation.
 */
#ifndef ECASURVEY_COMPARE_HPP
#define ECASURVEY_COMPARE_HPP

#include <span>
#include <vector>

#include "ecasurvey/ingest.hpp"
#include "ecasurvey/stats.hpp"

namespace ecasurvey::compare {

struct OutlierSplit {
  std::vector<double> kept;
  std::vector<std::size_t> removed_indices;
};

/// Single pass: removes exactly the values with |v - mean| > k * sigma, where
/// mean and (n-1) sigma come from the full input. Kept order is preserved.
OutlierSplit filter_outliers_sigma(std::span<const double> values, double k = 2.0);

/// Samples whose conductivity survives filter_outliers_sigma.
SurveyTrack filter_track_sigma(const SurveyTrack& track, double k, std::size_t* removed = nullptr);

struct AlignedSeries {
  std::vector<double> s;  ///< uniform in [0, 1]
  std::vector<double> a_values;
  std::vector<double> b_values;
};

/// Cumulative planar arc length of a track in the zone of its first sample,
/// metres.
std::vector<double> arc_length(const SurveyTrack& track);

/// Parameterises both tracks by normalised arc length and linearly
/// interpolates conductivity onto n_points uniform values of s.
AlignedSeries align_by_arclength(const SurveyTrack& a, const SurveyTrack& b,
                                 std::size_t n_points);

/// Least-squares polynomial in t = 2 (s - s_min) / (s_max - s_min) - 1.
struct PolyFit {
  std::size_t degree = 0;
  std::vector<double> coefficients;  ///< monomial coefficients in t, ascending
  double s_min = 0.0;
  double s_max = 1.0;

  double operator()(double s) const;
};

PolyFit polyfit_least_squares(std::span<const double> s, std::span<const double> v,
                              std::size_t degree = 8);

struct CompareOptions {
  double k_sigma = 2.0;
  std::size_t degree = 8;
  std::size_t n_points = 0;  ///< 0 = smaller of the two filtered track sizes
};

struct ComparisonReport {
  SummaryStats a_stats;
  SummaryStats b_stats;
  double offset = 0.0;  ///< a.mean - b.mean, mS/m
  double pcc_filtered = 0.0;
  double pcc_raw = 0.0;
  PolyFit polyfit_a;
  PolyFit polyfit_b;
  std::size_t n_aligned = 0;
  std::size_t n_outliers_removed = 0;
};

/// Compares track a (e.g. robotized) against track b (e.g. manual) over the
/// same path. pcc_raw aligns the unfiltered tracks; pcc_filtered aligns the
/// tracks after dropping each track's own +-k sigma outliers.
ComparisonReport compare_report(const SurveyTrack& a, const SurveyTrack& b,
                                const CompareOptions& options = {});

}  // namespace ecasurvey::compare

#endif  // ECASURVEY_COMPARE_HPP
