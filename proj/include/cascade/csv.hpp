#pragma once

#include <string>
#include <vector>

#include "cascade/sim.hpp"
#include "cascade/types.hpp"

namespace cascade {

/// Locale-independent shortest round-trip formatting ('.' decimal point).
std::string format_double(double value);

/// norms.csv: t, ||z_1||, ..., ||z_m||, ||z||.
void write_norms_csv(const std::string& path, const Trajectory& traj,
                     const Matrix& norms);

/// controls.csv: t, u_1, ..., u_N, sum_u.
void write_controls_csv(const std::string& path, const Trajectory& traj);

/// field_<i>.csv: header row "t" then the x grid; one row per time sample.
void write_field_csv(const std::string& path, const FieldGrid& grid,
                     int component);

}  // namespace cascade
