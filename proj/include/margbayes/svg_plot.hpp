#pragma once

#include <optional>
#include <string>
#include <vector>

namespace margbayes {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  /// Horizontal reference line (zero line, limit target).
  std::optional<double> reference_y;
  std::string reference_label;
  bool log_x = false;
};

inline constexpr int kPlotWidth = 800;
inline constexpr int kPlotHeight = 500;

/// Static SVG 1.1 document, 800 x 500.
std::string render_svg(const LinePlot& plot);

/// Writes render_svg(plot) to path; throws InvalidInput if the file cannot be written.
void write_svg(const std::string& path, const LinePlot& plot);

}  // namespace margbayes
