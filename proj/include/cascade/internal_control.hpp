#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cascade/spectral.hpp"
#include "cascade/transform.hpp"
#include "cascade/types.hpp"

namespace cascade {

/// One certification check: a named inequality with the measured value and
/// the bound it must respect.
struct CertCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct CertificationReport {
  std::vector<CertCheck> checks;
  bool all_passed() const;
};

struct SynthesisOptions {
  std::optional<int> mode_count_override;  // accepted when >= the minimal count
  double pole_gap = 1.0;
  int mode_count_cap = 512;
};

/// Proportional in-domain controller: one gain row k_q stabilizes the
/// reaction matrix, the mode transformations turn it into per-mode rows
/// kbar_n, and the shape-matrix inverse maps those onto the physical inputs.
struct InternalController {
  int n_modes = 0;
  double delta = 0.0;
  RowVector k_q;
  Matrix p;  // Lyapunov certificate for the shifted closed-loop reaction matrix
  TransformFamily family;
  std::vector<RowVector> kbar;  // kbar_1..kbar_N
  Matrix shape_mat;             // projections, n_modes x n_modes
  Matrix shape_mat_inv;
  Matrix k;                     // stacked input gains, n_modes x (m n_modes)
};

/// Smallest N with -lambda_{N+1} D + Sym(Q) + delta I negative definite,
/// floored at 1 when the plant is already that stable. An override may only
/// raise it. Throws past the safety cap.
int select_mode_count(const PlantSpec& spec, const SpectralBasis& basis,
                      double delta, const SynthesisOptions& options = {});

/// Stabilizing gain for the reaction matrix plus its Lyapunov certificate:
/// eigenvalues of Q + B k_q are placed at
///   -(delta - lambda_1 d_m) - pole_gap * r,  r = 1..m,
/// and p solves the Lyapunov equation for the shifted closed loop, so
/// Sym(p (Q + B k_q)) + (delta - lambda_1 d_m) p = -I/2 by construction.
std::pair<RowVector, Matrix> synthesize_stabilizing_gain(const PlantSpec& spec,
                                                         double delta,
                                                         double lambda1,
                                                         double pole_gap);

/// kbar_n = B^T ((Q - lambda_n d_m I) T_n + T_n (lambda_n D - Q)) + k_q T_n.
std::vector<RowVector> per_mode_gains(const PlantSpec& spec,
                                      const TransformFamily& family,
                                      const SpectralBasis& basis,
                                      const RowVector& k_q, int n_modes);

/// k = shape_mat^{-1} blkdiag{kbar_1, ..., kbar_N}; row j gives u_j as a
/// linear function of the stacked first-N mode coefficients.
Matrix assemble_gain(const Matrix& shape_mat_inv,
                     const std::vector<RowVector>& kbar);

InternalController synthesize_internal(const PlantSpec& spec,
                                       const SpectralBasis& basis, double delta,
                                       const SynthesisOptions& options = {});

/// Checks, for n <= N: the spectrum of -lambda_n D + Q + B kbar_n matches the
/// spectrum of Q + B k_q shifted by -lambda_n d_m, and sits left of -delta;
/// for n up to n_sim: the residual-mode definiteness condition; and that the
/// assembled closed-loop matrix keeps every eigenvalue left of
/// -delta (1 - 1e-6).
CertificationReport certify_internal(const PlantSpec& spec,
                                     const SpectralBasis& basis,
                                     const InternalController& ctrl, int n_sim);

}  // namespace cascade
