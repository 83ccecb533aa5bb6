// SPDX-License-Identifier: Apache-2.0
/*
 * calib.hpp
 *
 * Robot interference calibration from paired static readings: per-distance
 * summary statistics, ordinary least squares of robot-mounted readings on the
 * handheld baseline, and placement selection combining interference gates
 * with simulated probe oscillation.
 */
#ifndef ECASURVEY_CALIB_HPP
#define ECASURVEY_CALIB_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "ecasurvey/ingest.hpp"
#include "ecasurvey/placement.hpp"
#include "ecasurvey/stats.hpp"
#include "ecasurvey/terrasim.hpp"

namespace ecasurvey::calib {

/// measured ~ slope * baseline + intercept.
struct RegressionResult {
  double slope = 1.0;
  double intercept = 0.0;  ///< mS/m
  double pcc = 1.0;
  std::size_t n = 0;
};

/// Requires equal lengths >= 2 and a non-constant baseline. A constant
/// `measured` column yields slope 0 and pcc 0.
RegressionResult regress_against_baseline(std::span<const double> baseline,
                                          std::span<const double> measured);

/// Mean over points of |measured - baseline| / |baseline|, in percent.
/// Reported for plotting only; never used as a gate.
double mean_abs_relative_error_pct(std::span<const double> baseline,
                                   std::span<const double> measured);

struct CalibrationEntry {
  SummaryStats stats;
  RegressionResult regression;
  double error_pct = 0.0;
};

struct CalibrationTable {
  SummaryStats baseline;
  std::map<double, CalibrationEntry> per_distance;  ///< keyed by d_b, metres
};

/// Stats and regression of every column against the same baseline.
CalibrationTable build_calibration(std::span<const double> baseline,
                                   const std::map<double, std::vector<double>>& columns);

/// Replaces each conductivity c by (c - intercept) / slope.
/// Throws InputError when slope is 0.
SurveyTrack correct_offset(const SurveyTrack& track, const RegressionResult& r);

struct PlacementPolicy {
  double pcc_min = 0.98;
  double converge_tol = 0.5;    ///< mS/m between consecutive distances
  double osc_sigma_max = 3.1;   ///< cm
};

struct DistanceGate {
  double d_b = 0.0;
  double pcc = 0.0;
  double mean_step = 0.0;  ///< |mean(d_b) - mean(next d_b)|, NaN for the last
  bool pcc_ok = false;
  bool within_convergence = false;
};

struct Recommendation {
  PlacementConfig placement;
  double pcc = 0.0;
  double osc_sigma = 0.0;           ///< cm, report of the chosen placement
  double convergence_distance = 0.0;  ///< first d_b whose next step is within tolerance
  std::vector<DistanceGate> gates;
};

/// Picks a probe placement.
///
/// Interference gates: a distance passes when pcc >= pcc_min and it does not
/// lie beyond the convergence distance, the first d_b at which the mean
/// moves by at most converge_tol to the next tested distance (further
/// placements buy no interference reduction). If no distance converges, all
/// distances pass this gate.
///
/// Oscillation gate: among passing distances with a report whose sigma_dev
/// <= osc_sigma_max, the largest d_b wins, paired with the height whose
/// report has the smaller sigma_dev. Sigmas within 1e-9 relative are a tie,
/// which goes to the smaller d_h.
///
/// Throws InfeasibleError naming the gate that emptied the candidate set.
Recommendation recommend_placement(
    const CalibrationTable& table,
    const std::vector<std::pair<PlacementConfig, terrasim::OscillationReport>>& osc,
    const PlacementPolicy& policy = {});

/// Calibration csv: header "[group,]baseline,<d_b>,<d_b>,..." with one row per
/// measurement point. Distance headers are metres.
struct CalibrationInput {
  std::vector<std::string> groups;  ///< one per row, empty strings without a group column
  std::vector<double> baseline;
  std::map<double, std::vector<double>> columns;

  /// Rows belonging to `group` only.
  CalibrationInput subset(const std::string& group) const;
  /// Distinct group names in first-seen order.
  std::vector<std::string> group_names() const;
};

CalibrationInput read_calibration_input(std::istream& in);

/// Table export: columns d_b_m,mean,sigma,slope,intercept,pcc,n. The baseline
/// appears first as d_b_m = inf with the identity regression.
void write_calibration_csv(std::ostream& out, const CalibrationTable& table);
CalibrationTable read_calibration_csv(std::istream& in);

}  // namespace ecasurvey::calib

#endif  // ECASURVEY_CALIB_HPP
