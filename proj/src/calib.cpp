// SPDX-License-Identifier: Apache-2.0
#include "ecasurvey/calib.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "ecasurvey/error.hpp"
#include "util.hpp"

namespace ecasurvey::calib {

using detail::format_double;

RegressionResult regress_against_baseline(std::span<const double> baseline,
                                          std::span<const double> measured) {
  if (baseline.size() != measured.size())
    throw InputError("regression: length mismatch (" + std::to_string(baseline.size()) +
                     " vs " + std::to_string(measured.size()) + ")");
  const std::size_t n = baseline.size();
  if (n < 2) throw InputError("regression: need at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += baseline[i];
    my += measured[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = baseline[i] - mx;
    const double dy = measured[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0) throw InputError("regression: baseline has zero variance");
  RegressionResult r;
  r.n = n;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.pcc = syy == 0.0 ? 0.0 : std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return r;
}

double mean_abs_relative_error_pct(std::span<const double> baseline,
                                   std::span<const double> measured) {
  if (baseline.size() != measured.size() || baseline.empty())
    throw InputError("error percentage: length mismatch or empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    if (baseline[i] == 0.0) throw InputError("error percentage: zero baseline value");
    sum += std::abs(measured[i] - baseline[i]) / std::abs(baseline[i]);
  }
  return 100.0 * sum / static_cast<double>(baseline.size());
}

CalibrationTable build_calibration(std::span<const double> baseline,
                                   const std::map<double, std::vector<double>>& columns) {
  CalibrationTable table;
  table.baseline = column_stats(baseline);
  for (const auto& [d_b, column] : columns) {
    if (column.size() != baseline.size())
      throw InputError("calibration column d_b=" + format_double(d_b) + " has " +
                       std::to_string(column.size()) + " values, baseline has " +
                       std::to_string(baseline.size()));
    CalibrationEntry e;
    e.stats = column_stats(column);
    e.regression = regress_against_baseline(baseline, column);
    bool nonzero = std::none_of(baseline.begin(), baseline.end(), [](double v) { return v == 0.0; });
    e.error_pct = nonzero ? mean_abs_relative_error_pct(baseline, column)
                          : std::numeric_limits<double>::quiet_NaN();
    table.per_distance.emplace(d_b, e);
  }
  return table;
}

SurveyTrack correct_offset(const SurveyTrack& track, const RegressionResult& r) {
  if (r.slope == 0.0 || !std::isfinite(r.slope))
    throw InputError("correct_offset: regression slope must be finite and non-zero");
  SurveyTrack out = track;
  for (auto& s : out.samples) s.conductivity = (s.conductivity - r.intercept) / r.slope;
  return out;
}

namespace {

bool same_distance(double a, double b) { return std::abs(a - b) <= 1e-9; }

}  // namespace

Recommendation recommend_placement(
    const CalibrationTable& table,
    const std::vector<std::pair<PlacementConfig, terrasim::OscillationReport>>& osc,
    const PlacementPolicy& policy) {
  if (table.per_distance.empty()) throw InputError("recommend: calibration table is empty");
  if (osc.empty()) throw InputError("recommend: no oscillation reports");
  if (!std::isfinite(policy.pcc_min) || !std::isfinite(policy.converge_tol) ||
      !std::isfinite(policy.osc_sigma_max))
    throw InputError("recommend: policy thresholds must be finite");

  Recommendation rec;
  const std::vector<std::pair<double, CalibrationEntry>> rows(table.per_distance.begin(),
                                                              table.per_distance.end());
  double convergence = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    DistanceGate g;
    g.d_b = rows[i].first;
    g.pcc = rows[i].second.regression.pcc;
    g.pcc_ok = g.pcc >= policy.pcc_min;
    g.mean_step = std::numeric_limits<double>::quiet_NaN();
    if (i + 1 < rows.size()) {
      g.mean_step = std::abs(rows[i].second.stats.mean - rows[i + 1].second.stats.mean);
      if (g.mean_step <= policy.converge_tol && !std::isfinite(convergence)) convergence = g.d_b;
    }
    rec.gates.push_back(g);
  }
  rec.convergence_distance = convergence;
  for (auto& g : rec.gates) g.within_convergence = g.d_b <= convergence + 1e-12;

  if (std::none_of(rec.gates.begin(), rec.gates.end(), [](const auto& g) { return g.pcc_ok; }))
    throw InfeasibleError("pcc_min", "no probe distance reaches pcc >= " + format_double(policy.pcc_min));
  if (std::none_of(rec.gates.begin(), rec.gates.end(),
                   [](const auto& g) { return g.pcc_ok && g.within_convergence; }))
    throw InfeasibleError("converge_tol",
                          "every distance with pcc >= " + format_double(policy.pcc_min) +
                              " lies beyond the convergence distance " + format_double(convergence));

  // Largest interference-feasible distance with an acceptable oscillation report.
  bool any_report = false;
  for (auto it = rec.gates.rbegin(); it != rec.gates.rend(); ++it) {
    if (!it->pcc_ok || !it->within_convergence) continue;
    const std::pair<PlacementConfig, terrasim::OscillationReport>* best = nullptr;
    for (const auto& entry : osc) {
      if (!same_distance(entry.first.d_b, it->d_b)) continue;
      any_report = true;
      if (entry.second.sigma_dev > policy.osc_sigma_max) continue;
      if (!best) {
        best = &entry;
        continue;
      }
      // Sigmas equal up to rounding count as a tie so the smaller height wins.
      const double a = entry.second.sigma_dev, b = best->second.sigma_dev;
      const bool tie = std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
      if ((!tie && a < b) || (tie && entry.first.d_h < best->first.d_h)) best = &entry;
    }
    if (best) {
      rec.placement = {it->d_b, best->first.d_h};
      rec.pcc = it->pcc;
      rec.osc_sigma = best->second.sigma_dev;
      return rec;
    }
  }
  if (!any_report)
    throw InfeasibleError("osc_sigma_max",
                          "no oscillation report matches an interference-feasible distance");
  throw InfeasibleError("osc_sigma_max", "every feasible distance oscillates more than " +
                                             format_double(policy.osc_sigma_max) + " cm");
}

CalibrationInput CalibrationInput::subset(const std::string& group) const {
  CalibrationInput out;
  for (const auto& [d, col] : columns) out.columns[d];
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i] != group) continue;
    out.groups.push_back(groups[i]);
    out.baseline.push_back(baseline[i]);
    for (const auto& [d, col] : columns) out.columns[d].push_back(col[i]);
  }
  return out;
}

std::vector<std::string> CalibrationInput::group_names() const {
  std::vector<std::string> names;
  for (const auto& g : groups)
    if (std::find(names.begin(), names.end(), g) == names.end()) names.push_back(g);
  return names;
}

CalibrationInput read_calibration_input(std::istream& in) {
  CalibrationInput input;
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  bool grouped = false;
  std::vector<double> distances;
  while (std::getline(in, raw)) {
    ++line_no;
    if (line_no == 1) raw = detail::strip_bom(std::move(raw));
    if (detail::is_comment_or_blank(raw)) continue;
    const auto f = detail::split(detail::trim(raw));
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (!have_header) {
      std::size_t first = 0;
      if (!f.empty() && f[0] == "group") {
        grouped = true;
        first = 1;
      }
      if (f.size() < first + 1 || f[first] != "baseline")
        throw InputError(where + "calibration header must start with [group,]baseline");
      for (std::size_t i = first + 1; i < f.size(); ++i) {
        const auto d = detail::parse_double(f[i]);
        if (!d || !std::isfinite(*d) || *d <= 0.0)
          throw InputError(where + "bad distance header '" + std::string(f[i]) + "'");
        if (std::find(distances.begin(), distances.end(), *d) != distances.end())
          throw InputError(where + "duplicate distance " + std::string(f[i]));
        distances.push_back(*d);
        input.columns[*d];
      }
      have_header = true;
      continue;
    }
    const std::size_t expected = distances.size() + (grouped ? 2 : 1);
    if (f.size() != expected)
      throw InputError(where + "ragged row: expected " + std::to_string(expected) + " fields, got " +
                       std::to_string(f.size()));
    std::size_t k = 0;
    input.groups.push_back(grouped ? std::string(f[k++]) : std::string());
    const auto parse = [&](std::string_view s) {
      const auto v = detail::parse_double(s);
      if (!v || !std::isfinite(*v)) throw InputError(where + "bad value '" + std::string(s) + "'");
      return *v;
    };
    input.baseline.push_back(parse(f[k++]));
    for (double d : distances) input.columns[d].push_back(parse(f[k++]));
  }
  if (!have_header) throw InputError("calibration input: missing header");
  return input;
}

void write_calibration_csv(std::ostream& out, const CalibrationTable& table) {
  out << "d_b_m,mean,sigma,slope,intercept,pcc,n\n";
  out << "inf," << format_double(table.baseline.mean) << ',' << format_double(table.baseline.sigma)
      << ",1,0,1," << table.baseline.n << '\n';
  for (const auto& [d, e] : table.per_distance) {
    out << format_double(d) << ',' << format_double(e.stats.mean) << ','
        << format_double(e.stats.sigma) << ',' << format_double(e.regression.slope) << ','
        << format_double(e.regression.intercept) << ',' << format_double(e.regression.pcc) << ','
        << e.stats.n << '\n';
  }
}

CalibrationTable read_calibration_csv(std::istream& in) {
  CalibrationTable table;
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  bool have_baseline = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (detail::is_comment_or_blank(raw)) continue;
    const auto f = detail::split(detail::trim(raw));
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (!have_header) {
      if (detail::trim(raw) != "d_b_m,mean,sigma,slope,intercept,pcc,n")
        throw InputError(where + "expected header d_b_m,mean,sigma,slope,intercept,pcc,n");
      have_header = true;
      continue;
    }
    if (f.size() != 7) throw InputError(where + "expected 7 fields");
    double v[6];
    for (int i = 0; i < 6; ++i) {
      const auto p = detail::parse_double(f[i]);
      if (!p) throw InputError(where + "bad number '" + std::string(f[i]) + "'");
      v[i] = *p;
    }
    const auto n = detail::parse_long(f[6]);
    if (!n || *n < 0) throw InputError(where + "bad count");
    const SummaryStats stats{v[1], v[2], static_cast<std::size_t>(*n)};
    if (std::isinf(v[0])) {
      table.baseline = stats;
      have_baseline = true;
      continue;
    }
    CalibrationEntry e;
    e.stats = stats;
    e.regression = {v[3], v[4], v[5], static_cast<std::size_t>(*n)};
    e.error_pct = std::numeric_limits<double>::quiet_NaN();
    table.per_distance.emplace(v[0], e);
  }
  if (!have_baseline) throw InputError("calibration csv: missing baseline (inf) row");
  return table;
}

}  // namespace ecasurvey::calib
