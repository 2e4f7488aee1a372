#include "cascade/boundary_control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cascade/linalg.hpp"
#include "cascade/sim.hpp"

namespace cascade {

namespace {

constexpr double kPi = std::numbers::pi;

double max_eig_sym(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(linalg::sym(a),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

// Signed log-magnitude accumulator for the factorially growing products in
// the Cauchy inverse formula.
struct LogProduct {
  double log_mag = 0.0;
  int sign = 1;

  void multiply(double factor) {
    if (factor == 0.0) {
      sign = 0;
      return;
    }
    if (factor < 0.0) sign = -sign;
    log_mag += std::log(std::abs(factor));
  }
  void divide(double factor) {
    if (factor < 0.0) sign = -sign;
    log_mag -= std::log(std::abs(factor));
  }
  double value() const { return sign * std::exp(log_mag); }
  bool overflows() const { return log_mag > 706.0; }
};

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

int select_mode_count_boundary(const PlantSpec& spec, const SpectralBasis& basis,
                               double delta0, const SynthesisOptions& options) {
  // Same definiteness test as the internal selection, at rate delta0.
  return select_mode_count(spec, basis, delta0, options);
}

Vector choose_mus(const SpectralBasis& basis, int n_modes, int mu0) {
  if (mu0 < 1) {
    throw std::invalid_argument("mu0 must be a positive integer");
  }
  const double len = basis.length();
  const bool mixed = basis.kind() == BcKind::ND || basis.kind() == BcKind::DN;

  Vector mus(n_modes);
  for (int j = 1; j <= n_modes; ++j) {
    const double base = mixed ? j * kPi / len : (j - 0.5) * kPi / len;
    const double root = base + 2.0 * mu0 * kPi / len;
    mus[j - 1] = root * root;
  }

  // Strict separation from the basis spectrum, over every n that could
  // possibly collide (lambda_n beyond max mu clears all larger n).
  const double mu_max = mus[n_modes - 1];
  for (int n = 1;; ++n) {
    const double lambda = basis.eigenvalue(n);
    if (lambda > mu_max + 1.0) break;
    for (int j = 0; j < n_modes; ++j) {
      if (std::abs(mus[j] - lambda) < tol::mu_lambda_separation) {
        std::ostringstream msg;
        msg << "mu_" << j + 1 << " = " << mus[j]
            << " collides with eigenvalue lambda_" << n
            << "; input data are inconsistent";
        throw std::runtime_error(msg.str());
      }
    }
  }
  return mus;
}

Matrix psi_matrix(const SpectralBasis& basis, const Vector& mus, int n_modes) {
  Matrix psi(n_modes, n_modes);
  for (int j = 1; j <= n_modes; ++j) {
    const PsiFunction lift = psi_function(basis, mus[j - 1]);
    for (int n = 1; n <= n_modes; ++n) {
      psi(n - 1, j - 1) = project_psi(basis, lift, n);
    }
  }
  return psi;
}

PsiInverseResult psi_inverse_closed_form(const SpectralBasis& basis,
                                         const Vector& mus, int n_modes) {
  const int n = n_modes;
  PsiInverseResult result;

  // psi_{j,k} = rho_k / (mu_j - lambda_k): the row scale rho_k does not
  // depend on j, so recover it from the j = 1 lifting.
  Vector lambda(n), rho(n);
  const PsiFunction first = psi_function(basis, mus[0]);
  for (int k = 1; k <= n; ++k) {
    lambda[k - 1] = basis.eigenvalue(k);
    rho[k - 1] = project_psi(basis, first, k) * (mus[0] - lambda[k - 1]);
  }

  Matrix inverse(n, n);
  bool overflow = false;
  for (int i = 0; i < n && !overflow; ++i) {
    for (int k = 0; k < n && !overflow; ++k) {
      LogProduct p;
      for (int l = 0; l < n; ++l) {
        p.multiply(lambda[k] - mus[l]);
        p.multiply(lambda[l] - mus[i]);
      }
      p.divide(mus[i] - lambda[k]);
      for (int l = 0; l < n; ++l) {
        if (l != k) p.divide(lambda[l] - lambda[k]);
        if (l != i) p.divide(mus[i] - mus[l]);
      }
      p.divide(rho[k]);
      if (p.overflows()) {
        overflow = true;
        break;
      }
      inverse(i, k) = p.value();
    }
  }

  if (overflow) {
    const Matrix psi = psi_matrix(basis, mus, n);
    result.value = linalg::solve_linear(psi, Matrix::Identity(n, n));
    result.used_lu_fallback = true;
    return result;
  }
  result.value = inverse;
  return result;
}

int search_mu0(const PlantSpec& spec, const SpectralBasis& basis, int n_modes,
               double k_q, double delta0, int cap) {
  std::ostringstream trace;
  for (int mu0 = 1; mu0 <= cap; ++mu0) {
    const Vector mus = choose_mus(basis, n_modes, mu0);
    // The relaxation rates are the spectrum of Psi M Psi^-1, so the margin
    // over k_q is min_j mu_j - k_q; it grows like mu0^2.
    const double margin = mus.minCoeff() - k_q;

    BoundaryController probe;
    probe.n_modes = n_modes;
    probe.mus = mus;
    probe.psi = psi_matrix(basis, mus, n_modes);
    probe.psi_inv = psi_inverse_closed_form(basis, mus, n_modes).value;
    const double drift_margin =
        linalg::max_real_part(
            linalg::eigenvalues(transformed_drift(spec, basis, probe))) +
        delta0;

    if (margin > 0.0 && drift_margin < 0.0) return mu0;
    trace << "\n  mu0 = " << mu0 << ": min mu - k_q = " << margin
          << ", max Re eig(Hbar) + delta0 = " << drift_margin;
  }
  throw std::runtime_error("mu0 sweep exhausted up to " + std::to_string(cap) +
                           " without satisfying both margins:" + trace.str());
}

BoundaryController build_dynamic_law(const PlantSpec& spec,
                                     const SpectralBasis& basis, int n_modes,
                                     double k_q, double delta0, int mu0) {
  require_valid(spec);
  if (spec.mode != ActuationMode::Boundary) {
    throw std::invalid_argument("dynamic law needs a boundary-mode plant");
  }
  const int m = spec.m;
  const int n = n_modes;

  BoundaryController ctrl;
  ctrl.n_modes = n;
  ctrl.k_q = k_q;
  ctrl.delta0 = delta0;
  ctrl.mu0 = mu0;
  ctrl.mus = choose_mus(basis, n, mu0);
  ctrl.psi = psi_matrix(basis, ctrl.mus, n);
  PsiInverseResult inv = psi_inverse_closed_form(basis, ctrl.mus, n);
  ctrl.psi_inv = inv.value;
  ctrl.psi_inv_by_lu = inv.used_lu_fallback;

  const Matrix lambda =
      [&] {
        Vector l(n);
        for (int i = 1; i <= n; ++i) l[i - 1] = basis.eigenvalue(i);
        return Matrix(l.asDiagonal());
      }();
  const Matrix mu_diag = Matrix(ctrl.mus.asDiagonal());

  // Drift: block 1 relaxes the inputs at rates d_1 mu_j; blocks 2..m carry
  // the conjugated eigenvalue diagonal; the reaction matrix couples blocks.
  Matrix h0 = Matrix::Zero(m * n, m * n);
  h0.topLeftCorner(n, n) = spec.diffusion[0] * mu_diag;
  const Matrix conjugated = ctrl.psi_inv * lambda * ctrl.psi;
  for (int i = 1; i < m; ++i) {
    h0.block(i * n, i * n, n, n) = spec.diffusion[i] * conjugated;
  }
  ctrl.h = -h0 + kron(spec.reaction, Matrix::Identity(n, n));

  // theta row block for mode n: component i of the correction is
  // <Psi_n, X_i>, X ordered as col{u, r_1, ..., r_{m-1}}.
  ctrl.theta = Matrix::Zero(m * n, m * n);
  for (int mode = 0; mode < n; ++mode) {
    for (int i = 0; i < m; ++i) {
      ctrl.theta.block(mode * m + i, i * n, 1, n) = ctrl.psi.row(mode);
    }
  }

  // k acts on the stacked first-N modes (mode-major blocks of size m),
  // reading only the first component of each.
  ctrl.k = Matrix::Zero(n, m * n);
  const double gain = -spec.diffusion[0] * k_q;
  for (int mode = 0; mode < n; ++mode) {
    ctrl.k.col(mode * m) = gain * ctrl.psi_inv.col(mode);
  }

  return ctrl;
}

Matrix transformed_drift(const PlantSpec& spec, const SpectralBasis& basis,
                         const BoundaryController& ctrl) {
  const int m = spec.m;
  const int n = ctrl.n_modes;
  Vector lambda(n);
  for (int i = 1; i <= n; ++i) lambda[i - 1] = basis.eigenvalue(i);

  Matrix hbar0 = Matrix::Zero(m * n, m * n);
  hbar0.topLeftCorner(n, n) =
      spec.diffusion[0] * ctrl.psi * Matrix(ctrl.mus.asDiagonal()) * ctrl.psi_inv;
  for (int i = 1; i < m; ++i) {
    hbar0.block(i * n, i * n, n, n) =
        spec.diffusion[i] * Matrix(lambda.asDiagonal());
  }
  return -hbar0 + kron(spec.reaction, Matrix::Identity(n, n));
}

CertificationReport certify_boundary(const PlantSpec& spec,
                                     const SpectralBasis& basis,
                                     const BoundaryController& ctrl,
                                     int n_sim) {
  const int m = spec.m;
  const int n = ctrl.n_modes;
  const Matrix& q = spec.reaction;
  const Matrix diff = Matrix(spec.diffusion.asDiagonal());

  CertificationReport report;

  // Inverse consistency.
  {
    const double err =
        (ctrl.psi * ctrl.psi_inv - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    report.checks.push_back({"psi inverse identity",
                             err <= tol::psi_inverse_identity, err,
                             tol::psi_inverse_identity,
                             "max |Psi Psi^-1 - I| entrywise"});
  }

  // Input-relaxation margin. Psi M Psi^-1 is similar to diag{mu_j}, so its
  // spectrum consists exactly of the chosen rates; the margin over k_q is
  // certified there. (Its Euclidean symmetric part is unbounded below as mu0
  // grows, because the psi projections degenerate toward rank one, so a
  // symmetric-part test would reject every admissible configuration.)
  {
    // Evaluated in extended precision: the product is as ill-conditioned as
    // Psi itself, and a plain double eigensolve would blur the comparison
    // past the tolerance even for a perfectly consistent controller.
    using LongMatrix =
        Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const LongMatrix similarity =
        ctrl.psi.cast<long double>() *
        LongMatrix(ctrl.mus.cast<long double>().asDiagonal()) *
        ctrl.psi_inv.cast<long double>();
    Eigen::EigenSolver<LongMatrix> solver(similarity,
                                          /*computeEigenvectors=*/false);
    std::vector<long double> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = solver.eigenvalues()[i].real();
    std::sort(eigs.begin(), eigs.end());
    Vector sorted_mus = ctrl.mus;
    std::sort(sorted_mus.data(), sorted_mus.data() + sorted_mus.size());
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dev = static_cast<double>(
          std::abs(eigs[i] - static_cast<long double>(sorted_mus[i])));
      worst = std::max(worst, dev / std::max(1.0, sorted_mus[i]));
    }
    report.checks.push_back({"relaxation spectrum", worst <= 1e-7, worst, 1e-7,
                             "eig(Psi M Psi^-1) against the chosen mu values"});
    const double margin = ctrl.mus.minCoeff();
    report.checks.push_back({"mu margin", margin > ctrl.k_q, margin, ctrl.k_q,
                             "min relaxation rate must exceed k_q"});
  }

  // Controlled-mode blocks: Q - D diag{lambda_n + k_q, lambda_n, ...}.
  {
    double worst = -std::numeric_limits<double>::infinity();
    for (int mode = 1; mode <= n; ++mode) {
      const double lambda = basis.eigenvalue(mode);
      Vector rates(m);
      rates[0] = lambda + ctrl.k_q;
      for (int i = 1; i < m; ++i) rates[i] = lambda;
      const Matrix block = q - diff * Matrix(rates.asDiagonal());
      worst = std::max(worst, max_eig_sym(block));
    }
    report.checks.push_back({"controlled mode blocks",
                             worst <= -ctrl.delta0 + tol::definiteness_margin,
                             worst, -ctrl.delta0,
                             "max eig of Sym over the closed controlled blocks"});
  }

  // Transformed controller drift, certified spectrally for the same reason
  // as the mu margin.
  {
    const double worst = linalg::max_real_part(
        linalg::eigenvalues(transformed_drift(spec, basis, ctrl)));
    report.checks.push_back({"controller drift", worst < -ctrl.delta0, worst,
                             -ctrl.delta0, "max real part of eig(Hbar)"});
  }

  // Residual-mode definiteness.
  {
    double worst = -std::numeric_limits<double>::infinity();
    for (int mode = n + 1; mode <= n_sim; ++mode) {
      const Matrix test = -basis.eigenvalue(mode) * diff + linalg::sym(q) +
                          ctrl.delta0 * Matrix::Identity(m, m);
      worst = std::max(worst, max_eig_sym(test));
    }
    report.checks.push_back({"residual modes", worst < 0.0, worst, 0.0,
                             "max eig of -lambda_n D + Sym(Q) + delta0 I, "
                             "N < n <= n_sim"});
  }

  // Assembled closed loop.
  {
    const ClosedLoopSystem sys = assemble_boundary(spec, ctrl, basis, n_sim);
    const double max_real = linalg::max_real_part(linalg::eigenvalues(sys.a));
    const double bound = -ctrl.delta0 * (1.0 - tol::closed_loop_margin);
    report.checks.push_back({"assembled spectrum", max_real <= bound, max_real,
                             bound, "max real part of the assembled closed loop"});
  }

  return report;
}

}  // namespace cascade
