#include "margbayes/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "margbayes/core_model.hpp"

namespace margbayes {

namespace {

constexpr double kLeft = 90.0;
constexpr double kRight = 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;
constexpr std::array<const char*, 5> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                "#ff7f0e"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Range {
  double lo = INFINITY;
  double hi = -INFINITY;
  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-300) {
      const double w = std::max(std::abs(lo) * 0.1, 1e-12);
      lo -= w;
      hi += w;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

}  // namespace

std::string render_svg(const LinePlot& plot) {
  auto xform = [&](double x) { return plot.log_x ? std::log10(x) : x; };
  Range xr;
  Range yr;
  for (const auto& s : plot.series) {
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (plot.log_x && !(s.x[k] > 0.0)) continue;
      xr.include(xform(s.x[k]));
      yr.include(s.y[k]);
    }
  }
  if (plot.reference_y) yr.include(*plot.reference_y);
  xr.pad();
  yr.pad();

  const double w = kPlotWidth - kLeft - kRight;
  const double h = kPlotHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (xform(x) - xr.lo) / (xr.hi - xr.lo) * w; };
  auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * h; };

  std::ostringstream os;
  os.precision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kPlotWidth
     << "\" height=\"" << kPlotHeight << "\" viewBox=\"0 0 " << kPlotWidth << ' ' << kPlotHeight
     << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kPlotWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"16\">" << escape(plot.title) << "</text>\n"
     << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << w << "\" height=\"" << h
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 5; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / 5.0;
    const double gx = kLeft + w * k / 5.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * k / 5.0;
    const double gy = kTop + h - h * k / 5.0;
    os << "<line x1=\"" << gx << "\" y1=\"" << kTop + h << "\" x2=\"" << gx << "\" y2=\""
       << kTop + h + 5 << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << gx << "\" y=\"" << kTop + h + 20
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
       << tick_label(plot.log_x ? std::pow(10.0, fx) : fx) << "</text>\n"
       << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << gy << "\" x2=\"" << kLeft << "\" y2=\""
       << gy << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << kLeft - 8 << "\" y=\"" << gy + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << tick_label(fy) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + w / 2 << "\" y=\"" << kPlotHeight - 15
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
     << escape(plot.x_label) << "</text>\n"
     << "<text x=\"20\" y=\"" << kTop + h / 2 << "\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 20 " << kTop + h / 2
     << ")\">" << escape(plot.y_label) << "</text>\n";

  if (plot.reference_y) {
    const double gy = py(*plot.reference_y);
    os << "<line x1=\"" << kLeft << "\" y1=\"" << gy << "\" x2=\"" << kLeft + w << "\" y2=\""
       << gy << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n"
       << "<text x=\"" << kLeft + w - 4 << "\" y=\"" << gy - 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"gray\">"
       << escape(plot.reference_label) << "</text>\n";
  }

  for (std::size_t s = 0; s < plot.series.size(); ++s) {
    const auto& series = plot.series[s];
    const char* color = kColors[s % kColors.size()];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < series.x.size() && k < series.y.size(); ++k) {
      if (plot.log_x && !(series.x[k] > 0.0)) continue;
      if (!std::isfinite(series.y[k])) continue;
      os << px(series.x[k]) << ',' << py(series.y[k]) << ' ';
    }
    os << "\"/>\n"
       << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 18 + 16 * static_cast<double>(s)
       << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
       << escape(series.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(const std::string& path, const LinePlot& plot) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot open plot file " + path);
  out << render_svg(plot);
  if (!out) throw Error(ErrorKind::InvalidInput, "failed writing plot file " + path);
}

}  // namespace margbayes
