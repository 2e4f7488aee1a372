#pragma once

#include <functional>
#include <vector>

#include "cascade/plant.hpp"
#include "cascade/types.hpp"

namespace cascade {

/// Orthonormal eigenbasis of the scalar second-derivative operator on
/// (0, length) under one of the four Dirichlet/Neumann boundary patterns.
///
/// Mixed patterns (ND, DN): lambda_n = (n - 1/2)^2 pi^2 / L^2.
/// DD: lambda_n = n^2 pi^2 / L^2. NN: lambda_1 = 0 with the constant
/// eigenfunction 1/sqrt(L), lambda_n = (n-1)^2 pi^2 / L^2 afterwards.
/// Eigenfunctions carry amplitude sqrt(2/L) so the family is orthonormal in
/// L^2(0, L); modal coefficients, Parseval sums and reconstructions then need
/// no extra weights.
class SpectralBasis {
 public:
  SpectralBasis(BcKind kind, double length);

  BcKind kind() const { return kind_; }
  double length() const { return length_; }
  bool uses_sine() const;  // Dirichlet left end

  double wavenumber(int n) const;  // sqrt(lambda_n), n >= 1
  double eigenvalue(int n) const;
  double amplitude(int n) const;
  double phi(int n, double x) const;
  double phi_deriv(int n, double x) const;

 private:
  BcKind kind_;
  double length_;
};

/// Composite Simpson on [a, b]; points must be >= 3 (an even count falls
/// back to a trapezoid on the last interval).
double simpson(const std::function<double(double)>& f, double a, double b,
               int points = 4001);

/// Projection <b_j, phi_n>. Indicator shapes use the closed-form
/// antiderivative; sampled shapes use composite Simpson on their own grid.
double project_shape(const SpectralBasis& basis, const ShapeFn& shape, int n);

struct ShapeMatrixReport {
  Matrix b;               // entry (n, j) = <b_j, phi_n>
  double determinant = 0.0;
  double cond_estimate = 0.0;
  bool singular = false;  // |det| below threshold relative to row scales
};

/// The n_modes x n_modes matrix of shape projections whose invertibility is
/// what makes the first n_modes modes controllable from the shaped inputs.
ShapeMatrixReport shape_matrix(const SpectralBasis& basis,
                               const std::vector<ShapeFn>& shapes, int n_modes);

/// Lifting function for boundary actuation: the solution of
///   psi'' + mu psi = 0,  homogeneous condition at x = 0,  unit condition at
///   x = L (Dirichlet value or Neumann slope per the basis pattern).
struct PsiFunction {
  double mu = 0.0;
  double coef_cos = 0.0;
  double coef_sin = 0.0;

  double operator()(double x) const;
  double deriv(double x) const;
};

/// Solves the boundary-value problem above and verifies its residuals (ODE
/// at sample points, both boundary conditions). Throws when mu collides with
/// an eigenvalue of the basis.
PsiFunction psi_function(const SpectralBasis& basis, double mu);

/// Closed-form projection <psi, phi_n> via product-to-sum antiderivatives.
double project_psi(const SpectralBasis& basis, const PsiFunction& psi, int n);

/// One additive term of a trigonometric-polynomial signal:
/// amplitude * cos(frequency x) or amplitude * sin(frequency x);
/// frequency 0 with cosine encodes a constant.
struct TrigTerm {
  double amplitude = 0.0;
  double frequency = 0.0;
  bool sine = false;
};

/// One component of the initial state: either a trig polynomial or samples
/// on a uniform grid over [0, L].
struct ComponentSignal {
  std::vector<TrigTerm> terms;
  std::vector<double> samples;

  bool is_sampled() const { return !samples.empty(); }
};

using InitialCondition = std::vector<ComponentSignal>;

double evaluate_signal(const ComponentSignal& signal, double x, double length);

/// Modal coefficients of one component, closed form for trig polynomials and
/// Simpson for samples.
double project_component(const SpectralBasis& basis,
                         const ComponentSignal& signal, int n);

/// Mode-n coefficient vector of the full m-component initial state.
Vector project_initial(const SpectralBasis& basis, const InitialCondition& z0,
                       int n);

}  // namespace cascade
