#pragma once

#include <vector>

#include "cascade/types.hpp"

namespace cascade::linalg {

/// Symmetric part (A + A^T)/2.
inline Matrix sym(const Matrix& a) { return 0.5 * (a + a.transpose()); }

/// All eigenvalues of a square matrix. Throws on non-square input or if the
/// underlying Schur iteration fails to converge.
Spectrum eigenvalues(const Matrix& a);

double max_real_part(const Spectrum& s);

/// Eigenvalues sorted by real part, then imaginary part. Convenient for
/// comparing two spectra entrywise.
Spectrum sorted_eigenvalues(const Matrix& a);

/// True iff max eigenvalue of the symmetric matrix s is strictly below
/// -margin. Rejects inputs that are asymmetric beyond a relative tolerance.
bool is_negative_definite(const Matrix& s, double margin);

/// Solves a x = b by partial-pivot elimination. Throws when a pivot falls
/// below the singularity threshold.
Matrix solve_linear(const Matrix& a, const Matrix& b);

/// Solves A^T P + P A = -I for symmetric positive definite P via the
/// Kronecker linearization (I (x) A^T + A^T (x) I) vec(P) = -vec(I).
/// Requires a Hurwitz; the offending eigenvalue is reported otherwise.
/// Fine for the small dimensions this library works at.
Matrix lyapunov_solve(const Matrix& a);

Matrix controllability_matrix(const Matrix& a, const Vector& b);

/// Single-input pole placement: returns the row k such that q + b k has the
/// requested (distinct, real) eigenvalues. Ackermann's formula; throws when
/// the controllability matrix of (q, b) is singular.
RowVector ackermann_place(const Matrix& q, const Vector& b,
                          const std::vector<double>& poles);

/// exp(a t) by scaling and squaring with diagonal Pade approximants
/// (degrees 3/5/7/9/13 selected from the scaled norm).
Matrix matrix_exponential(const Matrix& a, double t);

}  // namespace cascade::linalg
