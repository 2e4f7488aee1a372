#pragma once

#include <optional>
#include <string>

#include "cascade/plant.hpp"
#include "cascade/spectral.hpp"

namespace cascade {

/// One synthesis/simulation run as described by a JSON config file. See
/// docs/config.md for the field reference; unknown fields are rejected.
struct RunConfig {
  PlantSpec plant;
  double rate = 0.0;              // delta (internal) or delta0 (boundary)
  std::optional<double> k_q;      // boundary only; validated, else searched
  InitialCondition initial;

  std::optional<int> n_modes;
  std::optional<int> n_sim;
  std::optional<int> mu0;
  double pole_gap = 1.0;
  double dt = 1e-3;
  double t_final = 1.0;
  int x_grid = 201;
  std::string output_dir = "out";

  int effective_n_sim(int n_modes_selected) const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin);

}  // namespace cascade
