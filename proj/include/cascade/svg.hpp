#pragma once

#include <string>
#include <vector>

#include "cascade/types.hpp"

namespace cascade {

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal hand-rolled line chart, one polyline per series.
void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::vector<LineSeries>& series);

/// Grayscale heatmap of a (rows x cols) value grid; row 0 is drawn at the
/// bottom edge.
void write_heatmap_svg(const std::string& path, const std::string& title,
                       const Matrix& values);

}  // namespace cascade
