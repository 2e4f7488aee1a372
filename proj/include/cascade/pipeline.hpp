#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cascade/boundary_control.hpp"
#include "cascade/config.hpp"
#include "cascade/internal_control.hpp"
#include "cascade/sim.hpp"

namespace cascade {

/// Result of the synthesis stage: exactly one controller kind is populated.
struct SynthesisOutcome {
  explicit SynthesisOutcome(SpectralBasis b) : basis(std::move(b)) {}

  SpectralBasis basis;
  int n_sim = 0;
  std::optional<InternalController> internal;
  std::optional<BoundaryController> boundary;
  CertificationReport certification;
  std::string document;  // structured-text controller export
};

SynthesisOutcome run_synthesis(const RunConfig& config);

struct SimulationOutcome {
  ClosedLoopSystem system;
  Trajectory trajectory;
  Matrix norms;
  FieldGrid fields;
};

SimulationOutcome run_simulation(const RunConfig& config,
                                 const SynthesisOutcome& synth,
                                 Integrator method = Integrator::Expm);

/// norms.csv, controls.csv, field_<i>.csv plus SVG charts under out_dir.
void write_simulation_artifacts(const std::string& out_dir,
                                const RunConfig& config,
                                const SimulationOutcome& sim);

struct VerifyOutcome {
  std::vector<CertCheck> checks;
  std::string text;
  bool passed = false;
};

/// Full property-check report for a config: construction residuals, spectrum
/// similarity, inverse identities, definiteness conditions and the assembled
/// spectrum bound. The seed drives the randomized residual spot checks.
VerifyOutcome run_verify(const RunConfig& config, unsigned seed);

/// Built-in end-to-end examples (the same content as the shipped config
/// files under configs/).
const char* builtin_internal_example();
const char* builtin_boundary_example();

struct ReproRow {
  std::string check;
  bool passed = false;
  std::string detail;
};

struct ReproOutcome {
  std::string name;
  std::vector<ReproRow> rows;
  double seconds = 0.0;
  bool passed() const;
};

/// End-to-end reproduction runs with their pinned expectations (mode counts,
/// transform entries, spectra, decay rates, runtime budgets). Artifacts are
/// written under out_dir when non-empty.
ReproOutcome repro_internal_example(const std::string& out_dir);
ReproOutcome repro_boundary_example(const std::string& out_dir);

}  // namespace cascade
