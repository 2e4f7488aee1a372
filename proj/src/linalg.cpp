#include "cascade/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace cascade::linalg {

namespace {

void require_square(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    std::ostringstream msg;
    msg << who << ": expected a square matrix, got " << a.rows() << "x"
        << a.cols();
    throw std::invalid_argument(msg.str());
  }
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(who) + ": non-finite entries");
  }
}

}  // namespace

Spectrum eigenvalues(const Matrix& a) {
  require_square(a, "eigenvalues");
  if (a.rows() == 0) return Spectrum(0);
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error(
        "eigenvalues: Schur iteration did not converge within the iteration "
        "budget");
  }
  return solver.eigenvalues();
}

double max_real_part(const Spectrum& s) {
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    worst = std::max(worst, s[i].real());
  }
  return worst;
}

Spectrum sorted_eigenvalues(const Matrix& a) {
  Spectrum s = eigenvalues(a);
  std::vector<std::complex<double>> values(s.data(), s.data() + s.size());
  std::sort(values.begin(), values.end(),
            [](const std::complex<double>& x, const std::complex<double>& y) {
              if (x.real() != y.real()) return x.real() < y.real();
              return x.imag() < y.imag();
            });
  return Eigen::Map<const Spectrum>(values.data(), s.size());
}

bool is_negative_definite(const Matrix& s, double margin) {
  require_square(s, "is_negative_definite");
  const double scale = std::max(1.0, s.norm());
  if ((s - s.transpose()).norm() > tol::symmetry_check * scale) {
    throw std::invalid_argument(
        "is_negative_definite: input is asymmetric beyond tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym(s),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff() < -margin;
}

Matrix solve_linear(const Matrix& a, const Matrix& b) {
  require_square(a, "solve_linear");
  if (b.rows() != a.rows()) {
    throw std::invalid_argument("solve_linear: row count mismatch");
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < tol::singular_pivot * scale) {
    throw std::runtime_error("solve_linear: matrix is numerically singular");
  }
  return lu.solve(b);
}

namespace {

// Osborne balancing with power-of-two factors; returns the diagonal scale d
// such that diag(d)^-1 A diag(d) has comparable row and column norms.
// Placed gains can leave the closed loop scaled across many orders of
// magnitude, which would poison the Kronecker solve below.
Vector balance_scale(const Matrix& a) {
  const Eigen::Index m = a.rows();
  Vector scale = Vector::Ones(m);
  Matrix work = a;
  for (int pass = 0; pass < 50; ++pass) {
    bool converged = true;
    for (Eigen::Index i = 0; i < m; ++i) {
      double col = work.col(i).cwiseAbs().sum() - std::abs(work(i, i));
      double row = work.row(i).cwiseAbs().sum() - std::abs(work(i, i));
      if (col == 0.0 || row == 0.0) continue;
      const double before = col + row;
      double factor = 1.0;
      while (col < row / 2.0) {
        col *= 2.0;
        row /= 2.0;
        factor *= 2.0;
      }
      while (col > row * 2.0) {
        col /= 2.0;
        row *= 2.0;
        factor /= 2.0;
      }
      if (factor != 1.0 && col + row < 0.95 * before) {
        scale[i] *= factor;
        work.col(i) *= factor;
        work.row(i) /= factor;
        converged = false;
      }
    }
    if (converged) break;
  }
  return scale;
}

}  // namespace

Matrix lyapunov_solve(const Matrix& a) {
  require_square(a, "lyapunov_solve");
  const Eigen::Index m = a.rows();

  const Spectrum spec = eigenvalues(a);
  for (Eigen::Index i = 0; i < spec.size(); ++i) {
    if (spec[i].real() >= 0.0) {
      std::ostringstream msg;
      msg << "lyapunov_solve: matrix is not Hurwitz, eigenvalue "
          << spec[i].real() << (spec[i].imag() < 0 ? "-" : "+")
          << std::abs(spec[i].imag()) << "i has non-negative real part";
      throw std::runtime_error(msg.str());
    }
  }

  // Balance once; the scales are powers of two, so undoing them at the end
  // is exact. Solving for the balanced variable with right side -d^2 makes
  // the recovered p satisfy a^T p + p a = -I.
  const Vector scale = balance_scale(a);
  const Matrix balanced =
      Matrix(scale.cwiseInverse().asDiagonal()) * a * Matrix(scale.asDiagonal());
  const Matrix bt = balanced.transpose();

  Matrix system = Matrix::Zero(m * m, m * m);
  // I (x) bt + bt (x) I, acting on vec(p) in column-major order.
  for (Eigen::Index j = 0; j < m; ++j) {
    system.block(j * m, j * m, m, m) += bt;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index k = 0; k < m; ++k) {
        system(j * m + i, k * m + i) += bt(j, k);
      }
    }
  }
  Matrix rhs_matrix = Matrix(Vector(-scale.cwiseProduct(scale)).asDiagonal());
  Vector rhs = Eigen::Map<const Vector>(rhs_matrix.data(), m * m);

  Eigen::PartialPivLU<Matrix> lu(system);
  Vector vec_p = lu.solve(rhs);
  for (int refine = 0; refine < 2; ++refine) {
    vec_p += lu.solve(rhs - system * vec_p);
  }
  if (!vec_p.allFinite()) {
    throw std::runtime_error("lyapunov_solve: linear solve broke down");
  }

  Matrix p = Eigen::Map<const Matrix>(vec_p.data(), m, m);
  p = Matrix(scale.cwiseInverse().asDiagonal()) * 0.5 * (p + p.transpose()) *
      Matrix(scale.cwiseInverse().asDiagonal());

  const double residual =
      (a.transpose() * p + p * a + Matrix::Identity(m, m)).norm();
  const double floor = 1.0 + 2.0 * a.norm() * p.norm();
  if (residual > tol::lyapunov_residual * floor) {
    std::ostringstream msg;
    msg << "lyapunov_solve: residual " << residual
        << " exceeds the scaled tolerance " << tol::lyapunov_residual * floor;
    throw std::runtime_error(msg.str());
  }
  return p;
}

Matrix controllability_matrix(const Matrix& a, const Vector& b) {
  const Eigen::Index m = a.rows();
  Matrix ctrl(m, m);
  Vector col = b;
  for (Eigen::Index j = 0; j < m; ++j) {
    ctrl.col(j) = col;
    col = a * col;
  }
  return ctrl;
}

RowVector ackermann_place(const Matrix& q, const Vector& b,
                          const std::vector<double>& poles) {
  require_square(q, "ackermann_place");
  const Eigen::Index m = q.rows();
  if (static_cast<Eigen::Index>(poles.size()) != m) {
    throw std::invalid_argument("ackermann_place: need one pole per state");
  }
  for (std::size_t i = 0; i < poles.size(); ++i) {
    for (std::size_t j = i + 1; j < poles.size(); ++j) {
      if (poles[i] == poles[j]) {
        throw std::invalid_argument("ackermann_place: poles must be distinct");
      }
    }
  }

  // Desired characteristic polynomial evaluated at q.
  Matrix poly = Matrix::Identity(m, m);
  for (double pole : poles) {
    poly = poly * (q - pole * Matrix::Identity(m, m));
  }

  const Matrix ctrl = controllability_matrix(q, b);
  Matrix last_row;
  try {
    // e_m^T C^{-1} p(Q), via C^T y = e_m.
    Vector e_m = Vector::Zero(m);
    e_m[m - 1] = 1.0;
    Vector y = solve_linear(ctrl.transpose(), e_m);
    last_row = y.transpose() * poly;
  } catch (const std::runtime_error&) {
    throw std::runtime_error(
        "ackermann_place: controllability matrix is singular");
  }
  return -last_row;
}

namespace {

// Diagonal Pade numerators; (v + u)(v - u)^{-1} approximates exp(m).
void pade_uv(const Matrix& m2, const Matrix& m4, const Matrix& m6,
             const Matrix& m, int degree, Matrix& u, Matrix& v) {
  const Eigen::Index n = m.rows();
  const Matrix id = Matrix::Identity(n, n);
  switch (degree) {
    case 3: {
      const double b[] = {120., 60., 12., 1.};
      u = m * (b[3] * m2 + b[1] * id);
      v = b[2] * m2 + b[0] * id;
      return;
    }
    case 5: {
      const double b[] = {30240., 15120., 3360., 420., 30., 1.};
      u = m * (b[5] * m4 + b[3] * m2 + b[1] * id);
      v = b[4] * m4 + b[2] * m2 + b[0] * id;
      return;
    }
    case 7: {
      const double b[] = {17297280., 8648640., 1995840., 277200.,
                          25200.,    1512.,    56.,      1.};
      u = m * (b[7] * m6 + b[5] * m4 + b[3] * m2 + b[1] * id);
      v = b[6] * m6 + b[4] * m4 + b[2] * m2 + b[0] * id;
      return;
    }
    case 9: {
      const double b[] = {17643225600., 8821612800., 2075673600., 302702400.,
                          30270240.,    2162160.,    110880.,     3960.,
                          90.,          1.};
      const Matrix m8 = m4 * m4;
      u = m * (b[9] * m8 + b[7] * m6 + b[5] * m4 + b[3] * m2 + b[1] * id);
      v = b[8] * m8 + b[6] * m6 + b[4] * m4 + b[2] * m2 + b[0] * id;
      return;
    }
    default: {  // 13
      const double b[] = {64764752532480000., 32382376266240000.,
                          7771770303897600.,  1187353796428800.,
                          129060195264000.,   10559470521600.,
                          670442572800.,      33522128640.,
                          1323241920.,        40840800.,
                          960960.,            16380.,
                          182.,               1.};
      u = m * (m6 * (b[13] * m6 + b[11] * m4 + b[9] * m2) + b[7] * m6 +
               b[5] * m4 + b[3] * m2 + b[1] * id);
      v = m6 * (b[12] * m6 + b[10] * m4 + b[8] * m2) + b[6] * m6 + b[4] * m4 +
          b[2] * m2 + b[0] * id;
      return;
    }
  }
}

}  // namespace

Matrix matrix_exponential(const Matrix& a, double t) {
  require_square(a, "matrix_exponential");
  if (!std::isfinite(t)) {
    throw std::invalid_argument("matrix_exponential: non-finite time");
  }
  const Eigen::Index n = a.rows();
  if (n == 0) return Matrix(0, 0);

  Matrix m = a * t;
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  if (!std::isfinite(norm)) {
    throw std::runtime_error("matrix_exponential: overflow in a*t");
  }

  // Degree thresholds from the standard scaling-and-squaring analysis.
  constexpr double theta3 = 1.495585217958292e-2;
  constexpr double theta5 = 2.539398330063230e-1;
  constexpr double theta7 = 9.504178996162932e-1;
  constexpr double theta9 = 2.097847961257068;
  constexpr double theta13 = 5.371920351148152;

  int squarings = 0;
  if (norm > theta13) {
    squarings = std::max(0, static_cast<int>(
                                std::ceil(std::log2(norm / theta13))));
    m /= std::pow(2.0, squarings);
  }

  const Matrix m2 = m * m;
  const Matrix m4 = m2 * m2;
  const Matrix m6 = m4 * m2;

  int degree = 13;
  if (norm <= theta3) degree = 3;
  else if (norm <= theta5) degree = 5;
  else if (norm <= theta7) degree = 7;
  else if (norm <= theta9) degree = 9;

  Matrix u, v;
  pade_uv(m2, m4, m6, m, degree, u, v);
  Matrix result = solve_linear(v - u, v + u);

  for (int i = 0; i < squarings; ++i) {
    result = result * result;
  }
  if (!result.allFinite()) {
    throw std::runtime_error("matrix_exponential: overflow for extreme ||a t||");
  }
  return result;
}

}  // namespace cascade::linalg
