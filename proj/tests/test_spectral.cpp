#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cascade/spectral.hpp"
#include "oracles.hpp"

using namespace cascade;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST_CASE("eigenvalues of the four boundary patterns") {
  const SpectralBasis nd(BcKind::ND, kPi);
  CHECK(nd.eigenvalue(1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(nd.eigenvalue(4) == doctest::Approx(12.25).epsilon(1e-14));

  const SpectralBasis dd(BcKind::DD, kPi);
  CHECK(dd.eigenvalue(2) == doctest::Approx(4.0).epsilon(1e-14));

  const SpectralBasis nn(BcKind::NN, kPi);
  CHECK(nn.eigenvalue(1) == 0.0);
  CHECK(nn.eigenvalue(2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nn.phi(1, 0.3) == doctest::Approx(1.0 / std::sqrt(kPi)));

  CHECK_THROWS(nd.eigenvalue(0));
}

TEST_CASE("eigenvalues increase strictly") {
  for (BcKind kind : {BcKind::NN, BcKind::ND, BcKind::DN, BcKind::DD}) {
    const SpectralBasis basis(kind, 2.7);
    for (int n = 1; n < 40; ++n) {
      CHECK(basis.eigenvalue(n + 1) > basis.eigenvalue(n));
    }
  }
}

TEST_CASE("the eigenfunction family is orthonormal") {
  for (BcKind kind : {BcKind::NN, BcKind::ND, BcKind::DN, BcKind::DD}) {
    const SpectralBasis basis(kind, kPi);
    double worst = 0.0;
    for (int n = 1; n <= 20; ++n) {
      for (int k = n; k <= 20; ++k) {
        const double inner = simpson(
            [&](double x) { return basis.phi(n, x) * basis.phi(k, x); }, 0.0,
            kPi, 4001);
        worst = std::max(worst, std::abs(inner - (n == k ? 1.0 : 0.0)));
      }
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("indicator projections match adaptive quadrature") {
  const SpectralBasis nd(BcKind::ND, kPi);
  const IndicatorShape narrow{0.1, 0.2};
  const double closed = project_shape(nd, narrow, 1);
  const double reference = oracles::adaptive_quadrature(
      [&](double x) { return nd.phi(1, x); }, 0.1, 0.2);
  CHECK(closed == doctest::Approx(reference).epsilon(1e-10));
  // frozen from the oracle: sqrt(2/pi) * 2 (sin 0.1 - sin 0.05)
  CHECK(closed == doctest::Approx(0.079555868544).epsilon(1e-8));

  // the whole-domain projection onto a sine mode has the closed antiderivative
  const SpectralBasis dd(BcKind::DD, kPi);
  for (int n = 1; n <= 4; ++n) {
    const double value = project_shape(dd, IndicatorShape{0.0, kPi}, n);
    const double expected =
        dd.amplitude(n) * (1.0 - std::cos(n * kPi)) / dd.wavenumber(n);
    CHECK(value == doctest::Approx(expected).epsilon(1e-12));
  }

  CHECK(project_shape(nd, IndicatorShape{0.7, 0.7}, 3) == 0.0);
}

TEST_CASE("sampled shapes integrate on their own grid") {
  const SpectralBasis nd(BcKind::ND, kPi);
  std::vector<double> samples(2001);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = kPi * static_cast<double>(i) / (samples.size() - 1);
    samples[i] = std::exp(-x) * (1.0 + 0.5 * x);
  }
  const double value = project_shape(nd, SampledShape{samples}, 3);
  const double reference = oracles::adaptive_quadrature(
      [&](double x) { return std::exp(-x) * (1.0 + 0.5 * x) * nd.phi(3, x); },
      0.0, kPi);
  CHECK(std::abs(value - reference) < 1e-8 * std::max(1.0, std::abs(reference)));
}

TEST_CASE("shape matrix nonsingularity reporting") {
  const SpectralBasis nd(BcKind::ND, kPi);
  const std::vector<ShapeFn> shapes = {IndicatorShape{0.1, 0.2},
                                       IndicatorShape{0.2, 0.3},
                                       IndicatorShape{0.3, 0.4}};
  const ShapeMatrixReport good = shape_matrix(nd, shapes, 3);
  CHECK_FALSE(good.singular);
  CHECK(good.cond_estimate > 1.0);

  const std::vector<ShapeFn> repeated = {IndicatorShape{0.1, 0.2},
                                         IndicatorShape{0.1, 0.2}};
  CHECK(shape_matrix(nd, repeated, 2).singular);

  const ShapeMatrixReport single =
      shape_matrix(nd, {IndicatorShape{0.0, 1.0}}, 1);
  CHECK_FALSE(single.singular);

  CHECK_THROWS(shape_matrix(nd, repeated, 3));
}

TEST_CASE("lifting functions solve their boundary-value problem") {
  const SpectralBasis nd(BcKind::ND, kPi);
  const PsiFunction psi1 = psi_function(nd, 121.0);
  // for this pattern the solution is -cos(11 x)
  CHECK(psi1.coef_cos == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(psi1.coef_sin == 0.0);
  CHECK(psi1.deriv(0.0) == 0.0);
  CHECK(psi1(kPi) == doctest::Approx(1.0).epsilon(1e-12));

  // Dirichlet left end: psi vanishes at zero, unit slope at the right end
  const SpectralBasis dn(BcKind::DN, kPi);
  const PsiFunction psi_dn = psi_function(dn, 121.0);
  CHECK(psi_dn(0.0) == 0.0);
  CHECK(psi_dn.deriv(kPi) == doctest::Approx(1.0).epsilon(1e-12));

  const SpectralBasis dd(BcKind::DD, kPi);
  const PsiFunction psi_dd = psi_function(dd, 132.25);  // (j - 1/2 + 2 mu0)^2
  CHECK(psi_dd(0.0) == 0.0);
  CHECK(psi_dd(kPi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lifting rejects rates colliding with the spectrum") {
  const SpectralBasis nd(BcKind::ND, kPi);
  CHECK_THROWS_WITH_AS(psi_function(nd, 12.25),
                       doctest::Contains("collides"), std::invalid_argument);
}

TEST_CASE("psi projections: closed form equals quadrature") {
  const SpectralBasis nd(BcKind::ND, kPi);
  const SpectralBasis dn(BcKind::DN, kPi);
  for (const SpectralBasis& basis : {nd, dn}) {
    for (int j = 1; j <= 10; ++j) {
      const double root = j + 2.0 * 5.0;  // mixed pattern, mu0 = 5
      const PsiFunction psi = psi_function(basis, root * root);
      for (int n = 1; n <= 10; ++n) {
        const double closed = project_psi(basis, psi, n);
        const double reference = oracles::adaptive_quadrature(
            [&](double x) { return psi(x) * basis.phi(n, x); }, 0.0, kPi);
        CHECK(std::abs(closed - reference) < 1e-9);
      }
    }
  }
}

TEST_CASE("psi projection value and sign pattern") {
  const SpectralBasis nd(BcKind::ND, kPi);
  const PsiFunction psi1 = psi_function(nd, 121.0);
  // frozen from the oracle: -sqrt(2/pi) * 0.5 / 120.75
  CHECK(project_psi(nd, psi1, 1) ==
        doctest::Approx(-0.003303869817).epsilon(1e-7));

  // the projections carry the factor (-1)^n sqrt(lambda_n) / (mu - lambda_n)
  for (int j = 1; j <= 3; ++j) {
    const double root = j + 10.0;
    const PsiFunction psi = psi_function(nd, root * root);
    for (int n = 1; n <= 8; ++n) {
      const double expected = (n % 2 == 0 ? 1.0 : -1.0) * nd.amplitude(n) *
                              nd.wavenumber(n) /
                              (root * root - nd.eigenvalue(n));
      CHECK(project_psi(nd, psi, n) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("modal projection of basis-aligned initial data") {
  const SpectralBasis nd(BcKind::ND, kPi);
  InitialCondition z0(3);
  // first component is exactly phi_1, others vanish
  z0[0].terms = {TrigTerm{nd.amplitude(1), nd.wavenumber(1), false}};
  const Vector first = project_initial(nd, z0, 1);
  CHECK(first[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(first[1] == 0.0);
  CHECK(first[2] == 0.0);
  for (int n = 2; n <= 6; ++n) {
    CHECK(std::abs(project_initial(nd, z0, n)[0]) < 1e-12);
  }

  const InitialCondition zero(3);
  CHECK(project_initial(nd, zero, 4).norm() == 0.0);
}

TEST_CASE("trig-polynomial projections match quadrature") {
  const SpectralBasis nd(BcKind::ND, kPi);
  InitialCondition z0(3);
  z0[0].terms = {TrigTerm{1.0, 1.0, false}, TrigTerm{1.0, 0.0, false}};
  z0[1].terms = {TrigTerm{6.0, 0.5, false}, TrigTerm{3.0, 0.0, false}};
  z0[2].terms = {TrigTerm{-1.0, 0.5, false}, TrigTerm{-0.5, 0.0, false}};
  const auto component = [&](int i, double x) {
    return evaluate_signal(z0[i], x, kPi);
  };
  for (int n = 1; n <= 12; ++n) {
    const Vector coeffs = project_initial(nd, z0, n);
    for (int i = 0; i < 3; ++i) {
      const double reference = oracles::adaptive_quadrature(
          [&](double x) { return component(i, x) * nd.phi(n, x); }, 0.0, kPi);
      CHECK(coeffs[i] == doctest::Approx(reference).epsilon(1e-9));
    }
  }
}

TEST_CASE("energy identity for smooth initial data") {
  const SpectralBasis nd(BcKind::ND, kPi);
  InitialCondition z0(3);
  z0[0].terms = {TrigTerm{1.0, 1.0, false}, TrigTerm{1.0, 0.0, false}};
  z0[1].terms = {TrigTerm{6.0, 0.5, false}, TrigTerm{3.0, 0.0, false}};
  z0[2].terms = {TrigTerm{-1.0, 0.5, false}, TrigTerm{-0.5, 0.0, false}};

  double physical = 0.0;
  for (int i = 0; i < 3; ++i) {
    physical += oracles::adaptive_quadrature(
        [&](double x) {
          const double v = evaluate_signal(z0[i], x, kPi);
          return v * v;
        },
        0.0, kPi);
  }
  double modal = 0.0;
  for (int n = 1; n <= 200; ++n) {
    modal += project_initial(nd, z0, n).squaredNorm();
  }
  CHECK(std::abs(modal - physical) < 0.01 * physical);
}
