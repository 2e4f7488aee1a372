#include "cascade/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "cascade/csv.hpp"

namespace cascade {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMargin = 56;

const char* kSeriesColors[] = {"#1f3b73", "#a63d40", "#3d8a5a",
                               "#8a6d3b", "#5b3b8a", "#3b7d8a"};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

}  // namespace

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::vector<LineSeries>& series) {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        x_min = x_max = s.x[i];
        y_min = y_max = s.y[i];
        first = false;
      }
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  auto px = [&](double x) {
    return kMargin + (x - x_min) / (x_max - x_min) * (kWidth - 2 * kMargin);
  };
  auto py = [&](double y) {
    return kHeight - kMargin -
           (y - y_min) / (y_max - y_min) * (kHeight - 2 * kMargin);
  };

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n"
      << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
      << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 18
      << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(x_min) << "</text>\n"
      << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 18
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(x_max) << "</text>\n"
      << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(y_min) << "</text>\n"
      << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(y_max) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kSeriesColors[s % std::size(kSeriesColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      out << format_double(px(series[s].x[i])) << ","
          << format_double(py(series[s].y[i])) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMargin - 8 << "\" y=\""
        << kMargin + 16 + 16 * static_cast<int>(s)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
        << "fill=\"" << color << "\">" << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
}

void write_heatmap_svg(const std::string& path, const std::string& title,
                       const Matrix& values) {
  const Eigen::Index rows = values.rows();
  const Eigen::Index cols = values.cols();
  if (rows == 0 || cols == 0) throw std::invalid_argument("empty heatmap");
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;

  const double cell_w = static_cast<double>(kWidth - 2 * kMargin) / cols;
  const double cell_h = static_cast<double>(kHeight - 2 * kMargin) / rows;

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << " (min "
      << format_double(lo) << ", max " << format_double(hi) << ")</text>\n";
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const int shade = static_cast<int>(
          std::lround(255.0 * (values(r, c) - lo) / span));
      const double x = kMargin + c * cell_w;
      const double y = kHeight - kMargin - (r + 1) * cell_h;
      out << "<rect x=\"" << format_double(x) << "\" y=\"" << format_double(y)
          << "\" width=\"" << format_double(cell_w + 0.5) << "\" height=\""
          << format_double(cell_h + 0.5) << "\" fill=\"rgb(" << shade << ","
          << shade << "," << shade << ")\"/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace cascade
