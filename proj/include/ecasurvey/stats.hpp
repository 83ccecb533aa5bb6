// SPDX-License-Identifier: Apache-2.0
#ifndef ECASURVEY_STATS_HPP
#define ECASURVEY_STATS_HPP

#include <cstddef>
#include <span>

namespace ecasurvey {

/// Mean and sample standard deviation (n-1 denominator) of a value column.
struct SummaryStats {
  double mean = 0.0;
  double sigma = 0.0;
  std::size_t n = 0;
};

/// Arithmetic mean and n-1 standard deviation. Requires n >= 2.
SummaryStats column_stats(std::span<const double> values);

/// Pearson product-moment correlation. Requires equal lengths >= 2 and
/// non-zero variance in both inputs.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace ecasurvey

#endif  // ECASURVEY_STATS_HPP
