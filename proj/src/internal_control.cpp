#include "cascade/internal_control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cascade/linalg.hpp"
#include "cascade/sim.hpp"

namespace cascade {

bool CertificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CertCheck& c) { return c.passed; });
}

namespace {

Matrix mode_count_test_matrix(const PlantSpec& spec, const SpectralBasis& basis,
                              double rate, int n) {
  const int m = spec.m;
  return -basis.eigenvalue(n) * Matrix(spec.diffusion.asDiagonal()) +
         linalg::sym(spec.reaction) + rate * Matrix::Identity(m, m);
}

int minimal_mode_count(const PlantSpec& spec, const SpectralBasis& basis,
                       double rate, int cap) {
  for (int n = 0; n <= cap; ++n) {
    if (linalg::is_negative_definite(mode_count_test_matrix(spec, basis, rate, n + 1),
                                     0.0)) {
      return std::max(1, n);
    }
  }
  std::ostringstream msg;
  msg << "mode-count selection exceeded the safety cap " << cap
      << "; the configuration looks pathological for rate " << rate;
  throw std::runtime_error(msg.str());
}

}  // namespace

int select_mode_count(const PlantSpec& spec, const SpectralBasis& basis,
                      double delta, const SynthesisOptions& options) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("decay rate must be positive");
  }
  const int minimal = minimal_mode_count(spec, basis, delta, options.mode_count_cap);
  if (options.mode_count_override) {
    if (*options.mode_count_override < minimal) {
      std::ostringstream msg;
      msg << "mode-count override " << *options.mode_count_override
          << " is below the minimal admissible count " << minimal;
      throw std::invalid_argument(msg.str());
    }
    return *options.mode_count_override;
  }
  return minimal;
}

std::pair<RowVector, Matrix> synthesize_stabilizing_gain(const PlantSpec& spec,
                                                         double delta,
                                                         double lambda1,
                                                         double pole_gap) {
  const int m = spec.m;
  const double shift = delta - lambda1 * spec.diffusion[m - 1];
  std::vector<double> poles(m);
  for (int r = 1; r <= m; ++r) poles[r - 1] = -shift - pole_gap * r;

  RowVector k_q;
  try {
    k_q = linalg::ackermann_place(spec.reaction, spec.input_column(), poles);
  } catch (const std::runtime_error&) {
    throw std::runtime_error(
        "pole placement failed: the controllability matrix of (Q, B) is "
        "singular, which contradicts the nonzero-subdiagonal condition; the "
        "input data are inconsistent");
  }

  // With the poles at -shift - gap*r the shifted closed loop is Hurwitz by
  // construction, so the certificate always exists.
  const Matrix closed = spec.reaction + spec.input_column() * k_q;
  const Matrix p =
      linalg::lyapunov_solve(closed + shift * Matrix::Identity(m, m));
  return {k_q, p};
}

std::vector<RowVector> per_mode_gains(const PlantSpec& spec,
                                      const TransformFamily& family,
                                      const SpectralBasis& basis,
                                      const RowVector& k_q, int n_modes) {
  const int m = spec.m;
  const Matrix& q = spec.reaction;
  const Matrix diff = Matrix(spec.diffusion.asDiagonal());
  const double d_m = spec.diffusion[m - 1];
  const Matrix id = Matrix::Identity(m, m);

  std::vector<RowVector> gains;
  gains.reserve(n_modes);
  for (int n = 1; n <= n_modes; ++n) {
    const double lambda = basis.eigenvalue(n);
    const Matrix t_n = family.assemble(lambda);
    const Matrix bracket =
        (q - lambda * d_m * id) * t_n + t_n * (lambda * diff - q);
    gains.push_back(bracket.row(0) + k_q * t_n);
  }
  return gains;
}

Matrix assemble_gain(const Matrix& shape_mat_inv,
                     const std::vector<RowVector>& kbar) {
  const int n_modes = static_cast<int>(kbar.size());
  if (shape_mat_inv.rows() != n_modes) {
    throw std::invalid_argument("assemble_gain: dimension mismatch");
  }
  const int m = static_cast<int>(kbar.front().size());
  Matrix block = Matrix::Zero(n_modes, m * n_modes);
  for (int n = 0; n < n_modes; ++n) {
    block.block(n, n * m, 1, m) = kbar[n];
  }
  return shape_mat_inv * block;
}

InternalController synthesize_internal(const PlantSpec& spec,
                                       const SpectralBasis& basis, double delta,
                                       const SynthesisOptions& options) {
  require_valid(spec);
  if (spec.mode != ActuationMode::Internal) {
    throw std::invalid_argument("internal synthesis needs an internal-mode plant");
  }

  InternalController ctrl;
  ctrl.delta = delta;
  ctrl.n_modes = select_mode_count(spec, basis, delta, options);

  auto [k_q, p] = synthesize_stabilizing_gain(spec, delta, basis.eigenvalue(1),
                                              options.pole_gap);
  ctrl.k_q = k_q;
  ctrl.p = p;

  ctrl.family = build_transform(spec);
  ctrl.kbar = per_mode_gains(spec, ctrl.family, basis, ctrl.k_q, ctrl.n_modes);

  ShapeMatrixReport shapes = shape_matrix(basis, spec.shapes, ctrl.n_modes);
  if (shapes.singular) {
    std::ostringstream msg;
    msg << "shape matrix is singular (|det| = " << std::abs(shapes.determinant)
        << "); the shape functions cannot address the first " << ctrl.n_modes
        << " modes";
    throw std::runtime_error(msg.str());
  }
  ctrl.shape_mat = shapes.b;
  ctrl.shape_mat_inv = linalg::solve_linear(
      shapes.b, Matrix::Identity(ctrl.n_modes, ctrl.n_modes));
  ctrl.k = assemble_gain(ctrl.shape_mat_inv, ctrl.kbar);
  return ctrl;
}

CertificationReport certify_internal(const PlantSpec& spec,
                                     const SpectralBasis& basis,
                                     const InternalController& ctrl,
                                     int n_sim) {
  const int m = spec.m;
  const Matrix& q = spec.reaction;
  const Matrix diff = Matrix(spec.diffusion.asDiagonal());
  const double d_m = spec.diffusion[m - 1];
  const Vector b = spec.input_column();

  CertificationReport report;

  // Lyapunov certificate for the target closed-loop reaction matrix.
  {
    const double shift = ctrl.delta - basis.eigenvalue(1) * d_m;
    const Matrix closed = q + b * ctrl.k_q;
    const Matrix cert = linalg::sym(ctrl.p * closed) + shift * ctrl.p;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cert, Eigen::EigenvaluesOnly);
    const double max_eig = solver.eigenvalues().maxCoeff();
    report.checks.push_back({"lyapunov certificate",
                             max_eig <= -tol::definiteness_margin, max_eig,
                             -tol::definiteness_margin,
                             "max eig of Sym(P(Q+BKq)) + (delta - lambda1 d_m) P"});
  }

  // Per-mode spectrum similarity against the shifted target spectrum.
  const Spectrum target = linalg::sorted_eigenvalues(q + b * ctrl.k_q);
  double worst_similarity = 0.0;
  double worst_margin = -std::numeric_limits<double>::infinity();
  for (int n = 1; n <= ctrl.n_modes; ++n) {
    const double lambda = basis.eigenvalue(n);
    const Matrix closed_mode = -lambda * diff + q + b * ctrl.kbar[n - 1];
    const Spectrum actual = linalg::sorted_eigenvalues(closed_mode);
    for (int i = 0; i < m; ++i) {
      const std::complex<double> expected = target[i] - lambda * d_m;
      worst_similarity = std::max(worst_similarity, std::abs(actual[i] - expected));
      worst_margin = std::max(worst_margin, actual[i].real());
    }
  }
  report.checks.push_back({"mode spectrum similarity",
                           worst_similarity <= tol::spectrum_similarity,
                           worst_similarity, tol::spectrum_similarity,
                           "max |eig(-lambda_n D + Q + B kbar_n) - (eig(Q+BKq) "
                           "- lambda_n d_m)| over n <= N"});
  report.checks.push_back({"controlled modes decay", worst_margin <= -ctrl.delta,
                           worst_margin, -ctrl.delta,
                           "max real part over controlled mode spectra"});

  // Residual-mode definiteness up to the simulation truncation.
  double worst_residual_eig = -std::numeric_limits<double>::infinity();
  for (int n = ctrl.n_modes + 1; n <= n_sim; ++n) {
    const Matrix test = -basis.eigenvalue(n) * diff + linalg::sym(q) +
                        ctrl.delta * Matrix::Identity(m, m);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(test, Eigen::EigenvaluesOnly);
    worst_residual_eig = std::max(worst_residual_eig, solver.eigenvalues().maxCoeff());
  }
  report.checks.push_back({"residual modes", worst_residual_eig < 0.0,
                           worst_residual_eig, 0.0,
                           "max eig of -lambda_n D + Sym(Q) + delta I, N < n <= n_sim"});

  // Assembled closed loop, spillover included.
  {
    const ClosedLoopSystem sys = assemble_internal(spec, ctrl, basis, n_sim);
    const double max_real = linalg::max_real_part(linalg::eigenvalues(sys.a));
    const double bound = -ctrl.delta * (1.0 - tol::closed_loop_margin);
    report.checks.push_back({"assembled spectrum", max_real <= bound, max_real,
                             bound, "max real part of the assembled closed loop"});
  }

  return report;
}

}  // namespace cascade
