#pragma once

// Test-only oracles, independent of the library's computation paths.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "cascade/plant.hpp"
#include "cascade/types.hpp"

namespace oracles {

// Adaptive Simpson quadrature, recursion-based error control.
inline double adaptive_simpson_step(const std::function<double(double)>& f,
                                    double a, double b, double fa, double fm,
                                    double fb, double whole, double eps,
                                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps,
                               depth - 1) +
         adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps,
                               depth - 1);
}

inline double adaptive_one_panel(const std::function<double(double)>& f,
                                 double a, double b, double eps) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_step(f, a, b, fa, fm, fb, whole, eps, 40);
}

// The panel boundaries are deliberately incommensurate with the dyadic
// refinement so that trigonometric integrands cannot vanish on every sample
// point and spoof the error estimate.
inline double adaptive_quadrature(const std::function<double(double)>& f,
                                  double a, double b, double eps = 1e-12) {
  const double c1 = a + (b - a) * 0.36787944117144233;  // 1/e
  const double c2 = a + (b - a) * 0.70710678118654752;  // 1/sqrt(2)
  return adaptive_one_panel(f, a, c1, eps / 3.0) +
         adaptive_one_panel(f, c1, c2, eps / 3.0) +
         adaptive_one_panel(f, c2, b, eps / 3.0);
}

// Roots of x^3 + p2 x^2 + p1 x + p0 via the trigonometric/Cardano formulas.
inline std::array<std::complex<double>, 3> cubic_roots(double p2, double p1,
                                                       double p0) {
  const double shift = p2 / 3.0;
  const double p = p1 - p2 * p2 / 3.0;
  const double q = 2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  std::array<std::complex<double>, 3> roots;
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + s);
    const double v = std::cbrt(-q / 2.0 - s);
    roots[0] = u + v - shift;
    const double re = -(u + v) / 2.0 - shift;
    const double im = std::sqrt(3.0) * (u - v) / 2.0;
    roots[1] = {re, im};
    roots[2] = {re, -im};
  } else {
    const double r = 2.0 * std::sqrt(std::max(0.0, -p / 3.0));
    const double phi =
        std::atan2(std::sqrt(std::max(0.0, -disc)), -q / 2.0) / 3.0;
    constexpr double tau = 2.0 * 3.14159265358979323846 / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots[k] = r * std::cos(phi + tau * k) - shift;
    }
  }
  return roots;
}

// Characteristic-polynomial coefficients of a 3x3 matrix:
// det(xI - A) = x^3 + p2 x^2 + p1 x + p0.
inline std::array<double, 3> charpoly_3x3(const cascade::Matrix& a) {
  const double tr = a.trace();
  double minors = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      minors += a(i, i) * a(j, j) - a(i, j) * a(j, i);
    }
  }
  const double det = a.determinant();
  return {-tr, minors, -det};
}

inline std::array<std::complex<double>, 3> eigenvalues_3x3(
    const cascade::Matrix& a) {
  const auto p = charpoly_3x3(a);
  return cubic_roots(p[0], p[1], p[2]);
}

// Random cascade plants for the property suites. Scales are kept moderate so
// the double-precision comparisons stay far from their tolerances.
struct CascadeDraw {
  bool distinct_only = false;
  double diffusion_low = 2.0;
  double diffusion_high = 3.0;
};

inline cascade::PlantSpec random_cascade(std::mt19937& rng, int m,
                                         const CascadeDraw& draw = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> offdiag(-1.5, 1.5);
  std::uniform_real_distribution<double> subdiag_mag(1.0, 2.0);

  cascade::PlantSpec spec;
  spec.m = m;
  spec.length = 3.141592653589793;
  spec.mode = cascade::ActuationMode::Internal;
  spec.gamma11 = 0.0;
  spec.gamma12 = 1.0;
  spec.gamma21 = 1.0;
  spec.gamma22 = 0.0;

  spec.diffusion.resize(m);
  const double span = draw.diffusion_high - draw.diffusion_low;
  for (int i = 0; i < m; ++i) {
    spec.diffusion[i] =
        draw.diffusion_low + span * (i + 0.2 + 0.6 * unit(rng)) / m;
  }
  // Shuffle so the distinctness index is exercised in arbitrary positions,
  // and optionally collapse a trailing block onto the last coefficient.
  for (int i = m - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(spec.diffusion[i], spec.diffusion[pick(rng)]);
  }
  if (!draw.distinct_only && unit(rng) < 0.4 && m >= 3) {
    std::uniform_int_distribution<int> start(1, m - 1);
    for (int i = start(rng); i < m; ++i) {
      spec.diffusion[i] = spec.diffusion[m - 1];
    }
  }

  spec.reaction = cascade::Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      spec.reaction(i, j) = offdiag(rng);
    }
  }
  for (int i = 0; i + 1 < m; ++i) {
    spec.reaction(i + 1, i) = (unit(rng) < 0.5 ? -1.0 : 1.0) * subdiag_mag(rng);
  }
  return spec;
}

}  // namespace oracles
