// SPDX-License-Identifier: Apache-2.0
#ifndef ECASURVEY_PLOT_HPP
#define ECASURVEY_PLOT_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ecasurvey::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  ///< points instead of a polyline
};

struct Figure {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Static 640x400 SVG with axes, min/max tick labels and a legend.
/// Non-finite points are skipped.
void write_svg(std::ostream& out, const Figure& fig);

}  // namespace ecasurvey::plot

#endif  // ECASURVEY_PLOT_HPP
