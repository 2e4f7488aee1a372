#include "cascade/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace cascade {

std::string format_double(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buffer, ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // fixed '\n' line endings
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

}  // namespace

void write_norms_csv(const std::string& path, const Trajectory& traj,
                     const Matrix& norms) {
  std::ofstream out = open_out(path);
  const Eigen::Index m = norms.rows() - 1;
  out << "t";
  for (Eigen::Index i = 1; i <= m; ++i) out << ",norm_z" << i;
  out << ",norm_z\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << format_double(traj.times[k]);
    for (Eigen::Index i = 0; i <= m; ++i) {
      out << "," << format_double(norms(i, static_cast<Eigen::Index>(k)));
    }
    out << "\n";
  }
}

void write_controls_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  const Eigen::Index n = traj.controls.rows();
  out << "t";
  for (Eigen::Index j = 1; j <= n; ++j) out << ",u_" << j;
  out << ",sum_u\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto column = traj.controls.col(static_cast<Eigen::Index>(k));
    out << format_double(traj.times[k]);
    for (Eigen::Index j = 0; j < n; ++j) out << "," << format_double(column[j]);
    out << "," << format_double(column.sum()) << "\n";
  }
}

void write_field_csv(const std::string& path, const FieldGrid& grid,
                     int component) {
  std::ofstream out = open_out(path);
  out << "t";
  for (double x : grid.x) out << "," << format_double(x);
  out << "\n";
  const Matrix& values = grid.values.at(component);
  for (std::size_t row = 0; row < grid.times.size(); ++row) {
    out << format_double(grid.times[row]);
    for (Eigen::Index i = 0; i < values.cols(); ++i) {
      out << "," << format_double(values(static_cast<Eigen::Index>(row), i));
    }
    out << "\n";
  }
}

}  // namespace cascade
