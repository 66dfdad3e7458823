#include "corpusdiff/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "corpusdiff/error.hpp"

namespace corpusdiff {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 50.0;
constexpr double kMarginBottom = 60.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (hi <= lo) {
      hi = lo + 1.0;
      return;
    }
    const double m = (hi - lo) * 0.05;
    lo -= m;
    hi += m;
  }
};

std::vector<double> ticks(const Range& r, int n) {
  std::vector<double> out;
  for (int i = 0; i <= n; ++i)
    out.push_back(r.lo + (r.hi - r.lo) * i / n);
  return out;
}

void axes(std::ostringstream& svg, const Range& xr, const Range& yr,
          const std::string& title, const std::string& x_label,
          const std::string& y_label) {
  const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"25\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(title) << "</text>\n";
  svg << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << xml_escape(x_label) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << (y0 + y1) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 18 " << (y0 + y1) / 2 << ")\">" << xml_escape(y_label)
      << "</text>\n";
  for (const double t : ticks(xr, 8)) {
    const double px = x0 + (t - xr.lo) / (xr.hi - xr.lo) * (x1 - x0);
    svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << y0 << "\" x2=\"" << fmt(px)
        << "\" y2=\"" << y0 + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(px) << "\" y=\"" << y0 + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(t) << "</text>\n";
  }
  for (const double t : ticks(yr, 6)) {
    const double py = y0 - (t - yr.lo) / (yr.hi - yr.lo) * (y0 - y1);
    svg << "<line x1=\"" << x0 - 5 << "\" y1=\"" << fmt(py) << "\" x2=\"" << x0
        << "\" y2=\"" << fmt(py) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << x0 - 9 << "\" y=\"" << fmt(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(t) << "</text>\n";
  }
}

}  // namespace

std::string svg_line_chart(const std::vector<SvgSeries>& series,
                           const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::string& meta) {
  if (series.empty()) throw Error("svg_line_chart: no series");
  Range xr{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
  Range yr{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      xr.add(x);
      yr.add(y);
    }
  xr.pad();
  yr.pad();

  const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n";
  svg << "<!-- " << xml_escape(meta) << " -->\n";
  axes(svg, xr, yr, title, x_label, y_label);
  double legend_y = kMarginTop + 10;
  for (const auto& s : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points) {
      const double px = x0 + (x - xr.lo) / (xr.hi - xr.lo) * (x1 - x0);
      const double py = y0 - (y - yr.lo) / (yr.hi - yr.lo) * (y0 - y1);
      svg << fmt(px) << "," << fmt(py) << " ";
    }
    svg << "\"/>\n";
    svg << "<line x1=\"" << x1 - 150 << "\" y1=\"" << legend_y << "\" x2=\"" << x1 - 120
        << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << x1 - 112 << "\" y=\"" << legend_y + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.label)
        << "</text>\n";
    legend_y += 18;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_scatter(const std::vector<EmbeddingPoint>& points,
                        const std::string& title, const std::string& meta) {
  Range xr{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
  Range yr{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
  for (const auto& p : points) {
    xr.add(p.x);
    yr.add(p.y);
  }
  if (points.empty()) {
    xr = {0.0, 1.0};
    yr = {0.0, 1.0};
  }
  xr.pad();
  yr.pad();

  const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n";
  svg << "<!-- " << xml_escape(meta) << " -->\n";
  axes(svg, xr, yr, title, "dimension 1", "dimension 2");
  for (const auto& p : points) {
    const char* color = p.group == Group::A ? "#1f4fd8"
                        : p.group == Group::B ? "#d62728"
                                              : "#7f7f7f";
    const double px = x0 + (p.x - xr.lo) / (xr.hi - xr.lo) * (x1 - x0);
    const double py = y0 - (p.y - yr.lo) / (yr.hi - yr.lo) * (y0 - y1);
    svg << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py)
        << "\" r=\"3\" fill=\"" << color << "\" fill-opacity=\"0.7\"/>\n";
  }
  // legend
  svg << "<circle cx=\"" << x1 - 150 << "\" cy=\"" << kMarginTop + 10
      << "\" r=\"4\" fill=\"#1f4fd8\"/>\n"
      << "<text x=\"" << x1 - 140 << "\" y=\"" << kMarginTop + 14
      << "\" font-family=\"sans-serif\" font-size=\"12\">group A</text>\n"
      << "<circle cx=\"" << x1 - 150 << "\" cy=\"" << kMarginTop + 28
      << "\" r=\"4\" fill=\"#d62728\"/>\n"
      << "<text x=\"" << x1 - 140 << "\" y=\"" << kMarginTop + 32
      << "\" font-family=\"sans-serif\" font-size=\"12\">group B</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace corpusdiff
