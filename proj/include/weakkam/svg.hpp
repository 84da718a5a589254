#pragma once

// Minimal SVG 1.1 plots: scatter and polyline series on linear or log axes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace weakkam::svg {

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool lines = true;
  std::string color = "#1f77b4";
};

struct Plot {
  std::string title;
  std::string x_label, y_label;
  bool log_x = false, log_y = false;
  int width = 640, height = 420;
  std::vector<Series> series;
  // optional fixed ranges; NaN means automatic
  double x_min = std::numeric_limits<double>::quiet_NaN(), x_max = std::numeric_limits<double>::quiet_NaN();
  double y_min = std::numeric_limits<double>::quiet_NaN(), y_max = std::numeric_limits<double>::quiet_NaN();
};

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> p{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  return p;
}

namespace detail {
inline std::string f(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}
inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}
}  // namespace detail

inline std::string render(const Plot& plot) {
  auto tx = [&](double v) { return plot.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return plot.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!plot.log_x || x > 0.0) && (!plot.log_y || y > 0.0);
  };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (!std::isnan(plot.x_min)) x0 = tx(plot.x_min);
  if (!std::isnan(plot.x_max)) x1 = tx(plot.x_max);
  if (!std::isnan(plot.y_min)) y0 = ty(plot.y_min);
  if (!std::isnan(plot.y_max)) y1 = ty(plot.y_max);
  if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0;
  if (!std::isfinite(y0)) y0 = 0.0, y1 = 1.0;
  if (x1 - x0 <= 0.0) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 <= 0.0) y0 -= 0.5, y1 += 0.5;

  const double left = 70, right = 20, top = 36, bottom = 50;
  const double pw = plot.width - left - right, ph = plot.height - top - bottom;
  auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + ph - (ty(v) - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << plot.width << "\" height=\""
     << plot.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << plot.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
     << detail::escape(plot.title) << "</text>\n"
     << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    const double sx = left + pw * i / 4.0, sy = top + ph - ph * i / 4.0;
    os << "<text x=\"" << detail::f(sx) << "\" y=\"" << detail::f(top + ph + 16) << "\" text-anchor=\"middle\">"
       << detail::f(plot.log_x ? std::pow(10.0, fx) : fx) << "</text>\n"
       << "<text x=\"" << detail::f(left - 6) << "\" y=\"" << detail::f(sy + 4) << "\" text-anchor=\"end\">"
       << detail::f(plot.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  os << "<text x=\"" << detail::f(left + pw / 2) << "\" y=\"" << plot.height - 12 << "\" text-anchor=\"middle\">"
     << detail::escape(plot.x_label) << "</text>\n"
     << "<text transform=\"translate(16," << detail::f(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << detail::escape(plot.y_label) << "</text>\n";

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const Series& s = plot.series[k];
    if (s.lines) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (usable(s.x[i], s.y[i])) os << detail::f(px(s.x[i])) << ',' << detail::f(py(s.y[i])) << ' ';
      os << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (usable(s.x[i], s.y[i]))
        os << "<circle cx=\"" << detail::f(px(s.x[i])) << "\" cy=\"" << detail::f(py(s.y[i])) << "\" r=\""
           << (s.lines ? 2.5 : 2.0) << "\" fill=\"" << s.color << "\"/>\n";
    const double ly = top + 14 + 14.0 * static_cast<double>(k);
    os << "<rect x=\"" << detail::f(left + pw - 150) << "\" y=\"" << detail::f(ly - 8) << "\" width=\"10\" height=\"10\" fill=\""
       << s.color << "\"/>\n"
       << "<text x=\"" << detail::f(left + pw - 135) << "\" y=\"" << detail::f(ly + 1) << "\">" << detail::escape(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace weakkam::svg
