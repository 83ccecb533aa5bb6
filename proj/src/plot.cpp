// SPDX-License-Identifier: Apache-2.0
#include "ecasurvey/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "util.hpp"

namespace ecasurvey::plot {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string px(double v) { return detail::format_fixed(v, 2); }

}  // namespace

void write_svg(std::ostream& out, const Figure& fig) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : fig.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  const auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(fig.title) << "</text>\n";
  out << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\"" << px(pw) << "\" height=\""
      << px(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  const auto label = [&](double x, double y, const std::string& text, const char* anchor) {
    out << "<text x=\"" << px(x) << "\" y=\"" << px(y) << "\" text-anchor=\"" << anchor << "\">"
        << escape(text) << "</text>\n";
  };
  label(kLeft, kTop + ph + 16, detail::format_double(xmin), "start");
  label(kLeft + pw, kTop + ph + 16, detail::format_double(xmax), "end");
  label(kLeft - 6, kTop + ph, detail::format_double(ymin), "end");
  label(kLeft - 6, kTop + 10, detail::format_double(ymax), "end");
  label(kLeft + pw / 2, kHeight - 12, fig.x_label, "middle");
  out << "<text transform=\"translate(18," << px(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(fig.y_label) << "</text>\n";

  for (std::size_t k = 0; k < fig.series.size(); ++k) {
    const auto& s = fig.series[k];
    const char* color = kColors[k % std::size(kColors)];
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.markers) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        out << "<circle cx=\"" << px(sx(s.x[i])) << "\" cy=\"" << px(sy(s.y[i])) << "\" r=\"2.5\" fill=\""
            << color << "\"/>\n";
      }
    } else {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        out << (first ? "" : " ") << px(sx(s.x[i])) << ',' << px(sy(s.y[i]));
        first = false;
      }
      out << "\"/>\n";
    }
    const double ly = kTop + 14 + 18 * static_cast<double>(k);
    out << "<rect x=\"" << px(kLeft + pw + 12) << "\" y=\"" << px(ly - 9) << "\" width=\"10\" height=\"10\" fill=\""
        << color << "\"/>\n";
    label(kLeft + pw + 28, ly, s.label, "start");
  }
  out << "</svg>\n";
}

}  // namespace ecasurvey::plot
