// SPDX-License-Identifier: Apache-2.0
#include "ecasurvey/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecasurvey/error.hpp"

namespace ecasurvey {

namespace {

double mean_of(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

SummaryStats column_stats(std::span<const double> values) {
  if (values.size() < 2)
    throw InputError("column_stats: need at least 2 values, got " +
                     std::to_string(values.size()));
  SummaryStats s;
  s.n = values.size();
  s.mean = mean_of(values);
  double ss = 0.0;
  for (double x : values) ss += (x - s.mean) * (x - s.mean);
  s.sigma = std::sqrt(ss / static_cast<double>(s.n - 1));
  return s;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw InputError("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  if (x.size() < 2) throw InputError("pearson: need at least 2 pairs");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw InputError("pearson: zero variance input");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace ecasurvey
