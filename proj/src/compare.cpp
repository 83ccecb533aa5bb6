// SPDX-License-Identifier: Apache-2.0
#include "ecasurvey/compare.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ecasurvey/error.hpp"

namespace ecasurvey::compare {

OutlierSplit filter_outliers_sigma(std::span<const double> values, double k) {
  if (!(k > 0.0)) throw InputError("filter_outliers_sigma: k must be positive");
  const SummaryStats s = column_stats(values);
  OutlierSplit out;
  const double limit = k * s.sigma;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i] - s.mean) > limit) out.removed_indices.push_back(i);
    else out.kept.push_back(values[i]);
  }
  return out;
}

SurveyTrack filter_track_sigma(const SurveyTrack& track, double k, std::size_t* removed) {
  std::vector<double> values;
  values.reserve(track.samples.size());
  for (const auto& s : track.samples) values.push_back(s.conductivity);
  const auto split = filter_outliers_sigma(values, k);
  SurveyTrack out;
  out.meta = track.meta;
  std::size_t next = 0;
  for (std::size_t i = 0; i < track.samples.size(); ++i) {
    if (next < split.removed_indices.size() && split.removed_indices[next] == i) {
      ++next;
      continue;
    }
    out.samples.push_back(track.samples[i]);
  }
  if (removed) *removed = split.removed_indices.size();
  return out;
}

std::vector<double> arc_length(const SurveyTrack& track) {
  std::vector<double> s;
  if (track.samples.empty()) return s;
  if (!track.samples.front().position) throw InputError("arc_length: sample 0 has no position");
  const auto zone = geodesy::zone_of(*track.samples.front().position);
  s.reserve(track.samples.size());
  double px = 0.0, py = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < track.samples.size(); ++i) {
    const auto& pos = track.samples[i].position;
    if (!pos) throw InputError("arc_length: sample " + std::to_string(i) + " has no position");
    const auto u = geodesy::wgs84_to_utm(*pos, zone);
    if (i > 0) acc += std::hypot(u.easting - px, u.northing - py);
    px = u.easting;
    py = u.northing;
    s.push_back(acc);
  }
  return s;
}

namespace {

// Linear interpolation of values over a non-decreasing abscissa.
double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), at) - x.begin());
  const std::size_t lo = hi - 1;
  const double span = x[hi] - x[lo];
  if (span <= 0.0) return y[lo];
  const double w = (at - x[lo]) / span;
  return y[lo] + w * (y[hi] - y[lo]);
}

std::vector<double> normalized_arc(const SurveyTrack& t, const char* name) {
  if (t.samples.size() < 2)
    throw InputError(std::string("align: track ") + name + " needs at least 2 samples");
  auto s = arc_length(t);
  const double total = s.back();
  if (!(total > 0.0)) throw InputError(std::string("align: track ") + name + " has zero length");
  for (auto& v : s) v /= total;
  return s;
}

}  // namespace

AlignedSeries align_by_arclength(const SurveyTrack& a, const SurveyTrack& b, std::size_t n_points) {
  if (n_points < 2) throw InputError("align: n_points must be >= 2");
  const auto sa = normalized_arc(a, "a");
  const auto sb = normalized_arc(b, "b");
  std::vector<double> va, vb;
  for (const auto& s : a.samples) va.push_back(s.conductivity);
  for (const auto& s : b.samples) vb.push_back(s.conductivity);
  AlignedSeries out;
  out.s.resize(n_points);
  out.a_values.resize(n_points);
  out.b_values.resize(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n_points - 1);
    out.s[i] = s;
    out.a_values[i] = interpolate(sa, va, s);
    out.b_values[i] = interpolate(sb, vb, s);
  }
  return out;
}

double PolyFit::operator()(double s) const {
  const double t = 2.0 * (s - s_min) / (s_max - s_min) - 1.0;
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * t + *it;
  return acc;
}

PolyFit polyfit_least_squares(std::span<const double> s, std::span<const double> v, std::size_t degree) {
  if (s.size() != v.size()) throw InputError("polyfit: length mismatch");
  if (s.size() <= degree)
    throw InputError("polyfit: " + std::to_string(s.size()) + " points cannot determine degree " +
                     std::to_string(degree));
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  if (!(*hi > *lo)) throw InputError("polyfit: abscissae are all equal");
  PolyFit fit;
  fit.degree = degree;
  fit.s_min = *lo;
  fit.s_max = *hi;
  const auto n = static_cast<Eigen::Index>(s.size());
  const auto p = static_cast<Eigen::Index>(degree + 1);
  Eigen::MatrixXd a(n, p);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = 2.0 * (s[static_cast<std::size_t>(i)] - fit.s_min) / (fit.s_max - fit.s_min) - 1.0;
    double pw = 1.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      a(i, j) = pw;
      pw *= t;
    }
    b(i) = v[static_cast<std::size_t>(i)];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < p)
    throw NumericalError("polyfit: rank " + std::to_string(qr.rank()) + " < " + std::to_string(p) +
                         " after rescaling (too few distinct abscissae)");
  const Eigen::VectorXd c = qr.solve(b);
  fit.coefficients.assign(c.data(), c.data() + p);
  return fit;
}

ComparisonReport compare_report(const SurveyTrack& a, const SurveyTrack& b, const CompareOptions& options) {
  validate(a);
  validate(b);
  ComparisonReport r;
  std::vector<double> va, vb;
  for (const auto& s : a.samples) va.push_back(s.conductivity);
  for (const auto& s : b.samples) vb.push_back(s.conductivity);
  r.a_stats = column_stats(va);
  r.b_stats = column_stats(vb);
  r.offset = r.a_stats.mean - r.b_stats.mean;

  std::size_t removed_a = 0, removed_b = 0;
  const auto fa = filter_track_sigma(a, options.k_sigma, &removed_a);
  const auto fb = filter_track_sigma(b, options.k_sigma, &removed_b);
  r.n_outliers_removed = removed_a + removed_b;

  const std::size_t n_raw =
      options.n_points ? options.n_points : std::min(a.samples.size(), b.samples.size());
  const std::size_t n_filtered =
      options.n_points ? options.n_points : std::min(fa.samples.size(), fb.samples.size());
  const auto raw = align_by_arclength(a, b, n_raw);
  const auto filtered = align_by_arclength(fa, fb, n_filtered);
  r.pcc_raw = pearson(raw.a_values, raw.b_values);
  r.pcc_filtered = pearson(filtered.a_values, filtered.b_values);
  r.n_aligned = filtered.s.size();
  r.polyfit_a = polyfit_least_squares(filtered.s, filtered.a_values, options.degree);
  r.polyfit_b = polyfit_least_squares(filtered.s, filtered.b_values, options.degree);
  return r;
}

}  // namespace ecasurvey::compare
