#pragma once

#include <vector>

#include "cascade/boundary_control.hpp"
#include "cascade/internal_control.hpp"
#include "cascade/spectral.hpp"
#include "cascade/types.hpp"

namespace cascade {

/// Finite spectral truncation of the closed loop as one LTI system.
///
/// Internal mode: state = (z_1, ..., z_{n_sim}), mode-major blocks of size m.
/// Boundary mode: state = (w_1, ..., w_{n_sim}, X) with X the controller
/// state (dimension m * n_modes). Residual modes are driven by the
/// controlled block but never drive it, so the assembled matrix is block
/// triangular by construction.
struct ClosedLoopSystem {
  ActuationMode mode = ActuationMode::Internal;
  int m = 0;
  int n_modes = 0;
  int n_sim = 0;
  Matrix a;
  Matrix control_map;  // u(t) = control_map * state

  // Boundary mode extras: lifting data needed to recover z from (w, X).
  Matrix psi_proj;                 // (n-1, j-1) = <psi_j, phi_n>, n <= n_sim
  std::vector<PsiFunction> lifts;  // psi_j themselves

  int mode_offset(int n) const { return (n - 1) * m; }
  int x_offset() const { return m * n_sim; }
  int dim() const { return static_cast<int>(a.rows()); }
};

ClosedLoopSystem assemble_internal(const PlantSpec& spec,
                                   const InternalController& ctrl,
                                   const SpectralBasis& basis, int n_sim);

ClosedLoopSystem assemble_boundary(const PlantSpec& spec,
                                   const BoundaryController& ctrl,
                                   const SpectralBasis& basis, int n_sim);

/// Initial simulator state from the physical initial data: modal projections
/// for the plant part, zero for the controller state.
Vector initial_state(const ClosedLoopSystem& sys, const SpectralBasis& basis,
                     const InitialCondition& z0);

struct Trajectory {
  std::vector<double> times;
  Matrix states;    // dim x (steps + 1)
  Matrix controls;  // n_modes x (steps + 1)
};

enum class Integrator { Expm, Rk4 };

/// Fixed-step propagation. The default stepper applies a precomputed
/// exp(A dt), exact for the LTI loop up to the exponential's accuracy; RK4 is
/// kept as an independent cross-check and rejects steps above its stability
/// bound 2.5 / rho(A).
Trajectory integrate(const ClosedLoopSystem& sys, const Vector& x0,
                     double t_final, double dt,
                     Integrator method = Integrator::Expm);

/// Per-time spatial L2 norms of the physical state, one row per component
/// plus a final row with the full-state norm (Parseval over the truncation).
Matrix state_norms(const ClosedLoopSystem& sys, const Trajectory& traj);

struct FieldGrid {
  std::vector<double> times;
  std::vector<double> x;
  std::vector<Matrix> values;  // one (times x x) grid per component
  // Boundary mode: worst deviation of the realized right-boundary value of
  // the first component from the applied input sum, and the truncation-tail
  // estimate it is compared against.
  double boundary_residual = 0.0;
  double truncation_estimate = 0.0;
};

FieldGrid reconstruct(const ClosedLoopSystem& sys, const Trajectory& traj,
                      const SpectralBasis& basis, int x_points,
                      int t_stride = 1);

struct DecayFit {
  double rate = 0.0;
  double envelope = 0.0;  // multiplicative constant relative to the t=0 norm
  bool window_truncated = false;
};

/// Least-squares slope of log ||z(t)|| over [t_begin, t_end]. Samples whose
/// norm underflows are dropped (flagged in the result).
DecayFit decay_rate(const Trajectory& traj, const Matrix& norms,
                    double t_begin, double t_end);

}  // namespace cascade
