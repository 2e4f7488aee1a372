#include "cascade/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cascade/linalg.hpp"

namespace cascade {

namespace {

constexpr double kPi = std::numbers::pi;

// integral_0^L cos(a x) cos(b x) dx, any a, b >= 0.
double integral_cc(double a, double b, double length) {
  if (a == b) {
    if (a == 0.0) return length;
    return 0.5 * length + std::sin(2.0 * a * length) / (4.0 * a);
  }
  const double num = a * std::sin(a * length) * std::cos(b * length) -
                     b * std::cos(a * length) * std::sin(b * length);
  return num / (a * a - b * b);
}

// integral_0^L sin(a x) sin(b x) dx, a, b > 0.
double integral_ss(double a, double b, double length) {
  if (a == b) {
    return 0.5 * length - std::sin(2.0 * a * length) / (4.0 * a);
  }
  const double num = b * std::sin(a * length) * std::cos(b * length) -
                     a * std::cos(a * length) * std::sin(b * length);
  return num / (a * a - b * b);
}

// integral_0^L cos(a x) sin(b x) dx, b > 0.
double integral_cs(double a, double b, double length) {
  if (a == b) {
    const double c = std::cos(a * length);
    return (1.0 - c * c) / (2.0 * a);
  }
  const double num = b - b * std::cos(a * length) * std::cos(b * length) -
                     a * std::sin(a * length) * std::sin(b * length);
  return num / (b * b - a * a);
}

// integral_0^L f(x) phi_n(x) dx where f is a single trig term.
double trig_against_phi(const SpectralBasis& basis, const TrigTerm& term,
                        int n) {
  const double w = basis.wavenumber(n);
  const double amp = basis.amplitude(n);
  const double len = basis.length();
  if (basis.uses_sine()) {
    if (term.sine) return term.amplitude * amp * integral_ss(term.frequency, w, len);
    return term.amplitude * amp * integral_cs(term.frequency, w, len);
  }
  if (term.sine) return term.amplitude * amp * integral_cs(w, term.frequency, len);
  return term.amplitude * amp * integral_cc(term.frequency, w, len);
}

double simpson_on_values(const std::vector<double>& values, double h) {
  const std::size_t count = values.size();
  if (count < 2) return 0.0;
  std::size_t pairs = (count - 1) / 2;
  double sum = 0.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    sum += values[2 * p] + 4.0 * values[2 * p + 1] + values[2 * p + 2];
  }
  sum *= h / 3.0;
  if ((count - 1) % 2 != 0) {
    sum += 0.5 * h * (values[count - 2] + values[count - 1]);
  }
  return sum;
}

}  // namespace

SpectralBasis::SpectralBasis(BcKind kind, double length)
    : kind_(kind), length_(length) {
  if (!(length > 0.0)) {
    throw std::invalid_argument("spectral basis: length must be positive");
  }
}

bool SpectralBasis::uses_sine() const {
  return kind_ == BcKind::DN || kind_ == BcKind::DD;
}

double SpectralBasis::wavenumber(int n) const {
  if (n < 1) throw std::invalid_argument("mode index must be >= 1");
  switch (kind_) {
    case BcKind::ND:
    case BcKind::DN:
      return (n - 0.5) * kPi / length_;
    case BcKind::DD:
      return n * kPi / length_;
    case BcKind::NN:
      return (n - 1) * kPi / length_;
  }
  return 0.0;
}

double SpectralBasis::eigenvalue(int n) const {
  const double w = wavenumber(n);
  return w * w;
}

double SpectralBasis::amplitude(int n) const {
  if (n < 1) throw std::invalid_argument("mode index must be >= 1");
  if (kind_ == BcKind::NN && n == 1) return 1.0 / std::sqrt(length_);
  return std::sqrt(2.0 / length_);
}

double SpectralBasis::phi(int n, double x) const {
  const double w = wavenumber(n);
  const double a = amplitude(n);
  return uses_sine() ? a * std::sin(w * x) : a * std::cos(w * x);
}

double SpectralBasis::phi_deriv(int n, double x) const {
  const double w = wavenumber(n);
  const double a = amplitude(n);
  return uses_sine() ? a * w * std::cos(w * x) : -a * w * std::sin(w * x);
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int points) {
  if (points < 3) throw std::invalid_argument("simpson: need at least 3 points");
  const double h = (b - a) / (points - 1);
  std::vector<double> values(points);
  for (int i = 0; i < points; ++i) values[i] = f(a + i * h);
  return simpson_on_values(values, h);
}

double project_shape(const SpectralBasis& basis, const ShapeFn& shape, int n) {
  if (const auto* ind = std::get_if<IndicatorShape>(&shape)) {
    const double w = basis.wavenumber(n);
    const double amp = basis.amplitude(n);
    if (w == 0.0) return amp * (ind->b - ind->a);
    if (basis.uses_sine()) {
      return amp * (std::cos(w * ind->a) - std::cos(w * ind->b)) / w;
    }
    return amp * (std::sin(w * ind->b) - std::sin(w * ind->a)) / w;
  }
  const auto& sampled = std::get<SampledShape>(shape);
  const std::size_t count = sampled.values.size();
  if (count < 3) throw std::invalid_argument("sampled shape: too few points");
  const double h = basis.length() / static_cast<double>(count - 1);
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = sampled.values[i] * basis.phi(n, i * h);
  }
  return simpson_on_values(values, h);
}

ShapeMatrixReport shape_matrix(const SpectralBasis& basis,
                               const std::vector<ShapeFn>& shapes,
                               int n_modes) {
  if (static_cast<int>(shapes.size()) < n_modes) {
    std::ostringstream msg;
    msg << "shape matrix: " << n_modes << " modes need at least " << n_modes
        << " shape functions, got " << shapes.size();
    throw std::invalid_argument(msg.str());
  }
  ShapeMatrixReport report;
  report.b.resize(n_modes, n_modes);
  for (int n = 1; n <= n_modes; ++n) {
    for (int j = 1; j <= n_modes; ++j) {
      report.b(n - 1, j - 1) = project_shape(basis, shapes[j - 1], n);
    }
  }

  Eigen::PartialPivLU<Matrix> lu(report.b);
  report.determinant = lu.determinant();
  double hadamard = 1.0;
  for (int i = 0; i < n_modes; ++i) hadamard *= report.b.row(i).norm();
  report.singular =
      std::abs(report.determinant) <= tol::shape_matrix_det * hadamard;
  if (!report.singular) {
    const Matrix inv = lu.inverse();
    report.cond_estimate = report.b.cwiseAbs().rowwise().sum().maxCoeff() *
                           inv.cwiseAbs().rowwise().sum().maxCoeff();
  } else {
    report.cond_estimate = std::numeric_limits<double>::infinity();
  }
  return report;
}

double PsiFunction::operator()(double x) const {
  const double t = std::sqrt(mu);
  return coef_cos * std::cos(t * x) + coef_sin * std::sin(t * x);
}

double PsiFunction::deriv(double x) const {
  const double t = std::sqrt(mu);
  return -coef_cos * t * std::sin(t * x) + coef_sin * t * std::cos(t * x);
}

PsiFunction psi_function(const SpectralBasis& basis, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("psi: mu must be positive");

  // mu must stay clear of the basis spectrum or the lifting is not defined.
  for (int n = 1;; ++n) {
    const double lambda = basis.eigenvalue(n);
    if (std::abs(mu - lambda) <= tol::mu_lambda_collision * std::max(1.0, mu)) {
      std::ostringstream msg;
      msg << "psi: mu = " << mu << " collides with eigenvalue lambda_" << n;
      throw std::invalid_argument(msg.str());
    }
    if (lambda > mu + 1.0) break;
  }

  const double t = std::sqrt(mu);
  const double len = basis.length();
  const double sin_l = std::sin(t * len);
  const double cos_l = std::cos(t * len);
  const bool left_dirichlet =
      basis.kind() == BcKind::DN || basis.kind() == BcKind::DD;
  const bool right_dirichlet =
      basis.kind() == BcKind::ND || basis.kind() == BcKind::DD;

  PsiFunction psi;
  psi.mu = mu;
  if (left_dirichlet) {
    // psi = beta sin(t x)
    const double denom = right_dirichlet ? sin_l : t * cos_l;
    if (std::abs(denom) < 1e-12) {
      throw std::invalid_argument("psi: right boundary condition degenerates");
    }
    psi.coef_sin = 1.0 / denom;
  } else {
    // psi = alpha cos(t x)
    const double denom = right_dirichlet ? cos_l : -t * sin_l;
    if (std::abs(denom) < 1e-12) {
      throw std::invalid_argument("psi: right boundary condition degenerates");
    }
    psi.coef_cos = 1.0 / denom;
  }

  // psi'' + mu psi = 0 holds identically for the pure trig form; the
  // boundary residuals are the checks with numerical content.
  const double scale = std::max({1.0, std::abs(psi.coef_cos), std::abs(psi.coef_sin)});
  const double left = left_dirichlet ? psi(0.0) : psi.deriv(0.0);
  const double right = right_dirichlet ? psi(len) : psi.deriv(len);
  if (std::abs(left) > tol::psi_bvp_residual * scale * std::max(1.0, t) ||
      std::abs(right - 1.0) > tol::psi_bvp_residual * scale * std::max(1.0, t)) {
    throw std::runtime_error("psi: boundary residual check failed");
  }
  return psi;
}

double project_psi(const SpectralBasis& basis, const PsiFunction& psi, int n) {
  const double t = std::sqrt(psi.mu);
  const double w = basis.wavenumber(n);
  const double amp = basis.amplitude(n);
  const double len = basis.length();
  if (basis.uses_sine()) {
    return amp * psi.coef_sin * integral_ss(t, w, len);
  }
  return amp * psi.coef_cos * integral_cc(t, w, len);
}

double evaluate_signal(const ComponentSignal& signal, double x, double length) {
  if (signal.is_sampled()) {
    const std::size_t count = signal.samples.size();
    const double h = length / static_cast<double>(count - 1);
    const double pos = std::clamp(x / h, 0.0, static_cast<double>(count - 1));
    const std::size_t i0 = std::min(count - 2, static_cast<std::size_t>(pos));
    const double frac = pos - static_cast<double>(i0);
    return (1.0 - frac) * signal.samples[i0] + frac * signal.samples[i0 + 1];
  }
  double value = 0.0;
  for (const auto& term : signal.terms) {
    value += term.sine ? term.amplitude * std::sin(term.frequency * x)
                       : term.amplitude * std::cos(term.frequency * x);
  }
  return value;
}

double project_component(const SpectralBasis& basis,
                         const ComponentSignal& signal, int n) {
  if (signal.is_sampled()) {
    const std::size_t count = signal.samples.size();
    if (count < 3) throw std::invalid_argument("sampled signal: too few points");
    const double h = basis.length() / static_cast<double>(count - 1);
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
      values[i] = signal.samples[i] * basis.phi(n, i * h);
    }
    return simpson_on_values(values, h);
  }
  double value = 0.0;
  for (const auto& term : signal.terms) {
    value += trig_against_phi(basis, term, n);
  }
  return value;
}

Vector project_initial(const SpectralBasis& basis, const InitialCondition& z0,
                       int n) {
  Vector coefficients(static_cast<Eigen::Index>(z0.size()));
  for (std::size_t i = 0; i < z0.size(); ++i) {
    coefficients[static_cast<Eigen::Index>(i)] =
        project_component(basis, z0[i], n);
  }
  return coefficients;
}

}  // namespace cascade
