#pragma once

#include <optional>
#include <vector>

#include "cascade/internal_control.hpp"  // CertCheck / CertificationReport / SynthesisOptions
#include "cascade/spectral.hpp"
#include "cascade/types.hpp"

namespace cascade {

/// Dynamic boundary controller. The boundary input is split into N
/// components lifted into the domain by the psi functions; the controller
/// state X = col{u, r_1, ..., r_{m-1}} (each block of length N) obeys a
/// linear law built from H, Theta and K, driven by the first N modal
/// projections of the plant state. X(0) = 0 always.
struct BoundaryController {
  int n_modes = 0;
  double k_q = 0.0;
  double delta0 = 0.0;
  int mu0 = 0;
  Vector mus;      // mu_1..mu_N
  Matrix psi;      // (n, j) = <psi_j, phi_n>, N x N
  Matrix psi_inv;  // closed-form inverse (LU fallback at extreme N)
  bool psi_inv_by_lu = false;
  Matrix h;      // drift of the controller state, mN x mN
  Matrix theta;  // stacked mode projections of X, mN x mN
  Matrix k;      // feedback gain on the transformed modes, N x mN

  int state_dim() const { return static_cast<int>(h.rows()); }
};

/// Smallest N with -lambda_{N+1} D + Sym(Q) + delta0 I negative definite;
/// an override may raise it.
int select_mode_count_boundary(const PlantSpec& spec, const SpectralBasis& basis,
                               double delta0, const SynthesisOptions& options = {});

/// sqrt(mu_j) = sqrt(mubar_j) + 2 mu0 pi / L with the mixed/matching
/// weighting of the base frequencies; mu0 is a positive integer. The chosen
/// mu_j are verified to stay clear of every basis eigenvalue.
Vector choose_mus(const SpectralBasis& basis, int n_modes, int mu0);

/// Projection matrix (n, j) = <psi_j, phi_n>.
Matrix psi_matrix(const SpectralBasis& basis, const Vector& mus, int n_modes);

struct PsiInverseResult {
  Matrix value;
  bool used_lu_fallback = false;
};

/// Closed-form inverse of the psi projection matrix. The matrix factors as
/// diag{rho_n} C with C_{n,j} = 1/(mu_j - lambda_n) a Cauchy matrix, whose
/// inverse has an explicit product formula; the products are evaluated in
/// log-magnitude plus sign form since they grow factorially. Falls back to
/// an LU solve when the products overflow doubles (extreme N).
PsiInverseResult psi_inverse_closed_form(const SpectralBasis& basis,
                                         const Vector& mus, int n_modes);

/// Smallest mu0 in {1, ..., cap} such that the relaxation rates dominate the
/// reaction gain (min_j mu_j > k_q; Psi M Psi^-1 is similar to diag{mu_j},
/// so this is its spectral margin and it grows like mu0^2) and the
/// transformed drift Hbar keeps every eigenvalue left of -delta0. Throws
/// with the margin trace when the sweep is exhausted.
int search_mu0(const PlantSpec& spec, const SpectralBasis& basis, int n_modes,
               double k_q, double delta0, int cap = 64);

/// Assembles H, Theta, K and the inverse for given selections. Certification
/// is separate so that inadmissible selections (e.g. mu0 too small) can be
/// built and then rejected with a diagnostic.
BoundaryController build_dynamic_law(const PlantSpec& spec,
                                     const SpectralBasis& basis, int n_modes,
                                     double k_q, double delta0, int mu0);

/// Transformed drift Hbar = -blkdiag{d_1 Psi M Psi^{-1}, d_2 Lambda, ...,
/// d_m Lambda} + Q (x) I_N, whose spectrum must sit left of -delta0. (The
/// Euclidean symmetric part of the first block is unbounded below as mu0
/// grows, so the drift condition is certified on the spectrum.)
Matrix transformed_drift(const PlantSpec& spec, const SpectralBasis& basis,
                         const BoundaryController& ctrl);

CertificationReport certify_boundary(const PlantSpec& spec,
                                     const SpectralBasis& basis,
                                     const BoundaryController& ctrl, int n_sim);

}  // namespace cascade
