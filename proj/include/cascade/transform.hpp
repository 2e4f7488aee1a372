#pragma once

#include <vector>

#include "cascade/plant.hpp"
#include "cascade/types.hpp"

namespace cascade {

/// Polynomial family of mode transformations T_n = I + sum_i lambda_n^i Tbar_i.
///
/// Each Tbar_i is nilpotent with a staircase sparsity pattern: row j may be
/// nonzero only for j <= m - 1 - ceil(i/2), at columns k >= j + ceil(i/2).
/// The family solves the recursive generalized Sylvester equations
///   (I - B B^T) (Q Tbar_i - Tbar_i Q + Tbar_{i-1} (D - d_m I)) = 0,
/// with Tbar_0 = I, which is what lets one gain computed for Q alone
/// stabilize every mode.
struct TransformFamily {
  int m = 0;
  int sigma = 0;
  int sigma_bar = 0;
  std::vector<Matrix> tbars;  // Tbar_1..Tbar_sigma_bar; empty when sigma_bar = 0

  /// T_n at a given eigenvalue; unit upper triangular, so always invertible
  /// with determinant exactly one.
  Matrix assemble(double lambda) const;
};

/// Pattern bounds for Tbar_i: rows 1..row_limit(i), columns >= j + col_shift(i)
/// (1-based). Exposed for the pattern-discipline tests.
int tbar_row_limit(int m, int i);
int tbar_col_shift(int i);

/// Builds the family by the recursive elimination: i ascending, rows
/// descending, columns descending; every coefficient is obtained by a single
/// division by the subdiagonal entry below its row, which the controllability
/// condition keeps nonzero. Entries outside the staircase pattern are
/// identically zero.
TransformFamily build_transform(const PlantSpec& spec);

/// Scaled residual of the i-th generalized Sylvester equation (1-based).
double sylvester_residual(const TransformFamily& family, const PlantSpec& spec,
                          int i);

/// Evaluates the full polynomial identity
///   (I - B B^T) [ (Q - lambda d_m I) S + S (lambda D - Q) + lambda (D - d_m I) ]
/// with S = sum_i lambda^i Tbar_i at each supplied lambda and returns the
/// worst scaled residual. Throws when the bound 1e-8 (1 + lambda^{sigma_bar+1}) ||Q||
/// is exceeded.
double certify_full_residual(const TransformFamily& family,
                             const PlantSpec& spec,
                             const std::vector<double>& lambdas);

/// Independent construction of the same family: each Sylvester equation is
/// vectorized over the pattern unknowns and solved as a dense least-squares
/// problem. Intended as a cross-check at small m; throws on rank deficiency,
/// which the controllability condition should rule out.
TransformFamily solve_transform_least_squares(const PlantSpec& spec);

}  // namespace cascade
