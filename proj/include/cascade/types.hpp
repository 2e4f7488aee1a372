#pragma once

#include <Eigen/Dense>

namespace cascade {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Spectrum = Eigen::VectorXcd;

/// Numerical tolerances used across the library. Kept in one place so the
/// property tests and the synthesis checks agree on a single tuning point.
namespace tol {

inline constexpr double symmetry_check = 1e-12;
inline constexpr double singular_pivot = 1e-13;
inline constexpr double linear_solve_residual = 1e-10;
inline constexpr double lyapunov_residual = 1e-8;
inline constexpr double pole_placement = 1e-6;
inline constexpr double expm_relative = 1e-9;

inline constexpr double orthonormality = 1e-8;
inline constexpr double shape_projection = 1e-8;
inline constexpr double psi_projection = 1e-9;
inline constexpr double psi_bvp_residual = 1e-10;
inline constexpr double mu_lambda_collision = 1e-9;
inline constexpr double mu_lambda_separation = 1e-6;

inline constexpr double sylvester_residual = 1e-10;
inline constexpr double full_residual = 1e-8;

inline constexpr double definiteness_margin = 1e-9;
inline constexpr double spectrum_similarity = 1e-6;
inline constexpr double closed_loop_margin = 1e-6;

inline constexpr double shape_matrix_det = 1e-10;
inline constexpr double psi_inverse_match = 1e-7;
inline constexpr double psi_inverse_identity = 1e-8;

}  // namespace tol

}  // namespace cascade
