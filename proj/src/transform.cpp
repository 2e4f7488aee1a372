#include "cascade/transform.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/QR>

#include "cascade/linalg.hpp"

namespace cascade {

namespace {

// (I - B B^T) X: zeroes the first row.
Matrix drop_first_row(Matrix x) {
  x.row(0).setZero();
  return x;
}

// Left side of the i-th generalized Sylvester equation before the row
// projection, with tbar_prev = Tbar_{i-1} (identity for i = 1).
Matrix sylvester_lhs(const Matrix& q, const Vector& d, const Matrix& tbar,
                     const Matrix& tbar_prev) {
  const double d_m = d[d.size() - 1];
  const Matrix shift = Matrix((d.array() - d_m).matrix().asDiagonal());
  return q * tbar - tbar * q + tbar_prev * shift;
}

}  // namespace

int tbar_row_limit(int m, int i) { return m - 1 - (i + 1) / 2; }

int tbar_col_shift(int i) { return (i + 1) / 2; }

Matrix TransformFamily::assemble(double lambda) const {
  Matrix t = Matrix::Identity(m, m);
  double power = 1.0;
  for (const Matrix& tbar : tbars) {
    power *= lambda;
    t += power * tbar;
  }
  return t;
}

TransformFamily build_transform(const PlantSpec& spec) {
  require_valid(spec);
  const int m = spec.m;
  const Matrix& q = spec.reaction;
  const Vector& d = spec.diffusion;
  const double d_m = d[m - 1];

  const SigmaIndex idx = sigma_index(spec);
  TransformFamily family;
  family.m = m;
  family.sigma = idx.sigma;
  family.sigma_bar = idx.sigma_bar;

  Matrix tbar_prev = Matrix::Identity(m, m);
  for (int i = 1; i <= family.sigma_bar; ++i) {
    const int shift = tbar_col_shift(i);
    const int row_limit = tbar_row_limit(m, i);
    Matrix tbar = Matrix::Zero(m, m);

    for (int j = row_limit; j >= 1; --j) {
      for (int k = m; k >= j + shift; --k) {
        // Entry (j+1, k) of the equation matrix, solved for kappa^i_{j,k}.
        // All other contributions involve row j+1 of Tbar_i (already fixed,
        // zero when outside the pattern) and rows below j in column k.
        double acc = 0.0;
        for (int l = j + 1; l <= m; ++l) {
          acc += tbar(j, l - 1) * q(l - 1, k - 1);      // (Tbar_i Q)_{j+1,k}
          acc -= q(j, l - 1) * tbar(l - 1, k - 1);      // (Q Tbar_i)_{j+1,k} tail
        }
        acc += (d_m - d[k - 1]) * tbar_prev(j, k - 1);  // (Tbar_{i-1}(D-d_m I))
        tbar(j - 1, k - 1) = acc / q(j, j - 1);
      }
    }

    family.tbars.push_back(tbar);
    tbar_prev = tbar;
  }

  // The recursion must leave every projected equation at zero.
  for (int i = 1; i <= family.sigma_bar; ++i) {
    const double residual = sylvester_residual(family, spec, i);
    if (residual > tol::sylvester_residual) {
      std::ostringstream msg;
      msg << "transform construction left Sylvester equation " << i
          << " with scaled residual " << residual;
      throw std::runtime_error(msg.str());
    }
  }
  return family;
}

double sylvester_residual(const TransformFamily& family, const PlantSpec& spec,
                          int i) {
  if (i < 1 || i > family.sigma_bar) {
    throw std::invalid_argument("sylvester_residual: index out of range");
  }
  const Matrix& tbar = family.tbars[i - 1];
  const Matrix tbar_prev =
      i == 1 ? Matrix(Matrix::Identity(family.m, family.m)) : family.tbars[i - 2];
  const Matrix lhs = drop_first_row(
      sylvester_lhs(spec.reaction, spec.diffusion, tbar, tbar_prev));
  const double scale = 1.0 + spec.reaction.norm() * tbar.norm();
  return lhs.norm() / scale;
}

double certify_full_residual(const TransformFamily& family,
                             const PlantSpec& spec,
                             const std::vector<double>& lambdas) {
  const int m = family.m;
  const Matrix& q = spec.reaction;
  const Vector& d = spec.diffusion;
  const double d_m = d[m - 1];
  const Matrix diff_shift = Matrix((d.array() - d_m).matrix().asDiagonal());
  const Matrix diff = Matrix(d.asDiagonal());
  const double q_norm = q.norm();

  double worst = 0.0;
  for (double lambda : lambdas) {
    Matrix s = Matrix::Zero(m, m);
    double power = 1.0;
    for (const Matrix& tbar : family.tbars) {
      power *= lambda;
      s += power * tbar;
    }
    const Matrix full = (q - lambda * d_m * Matrix::Identity(m, m)) * s +
                        s * (lambda * diff - q) + lambda * diff_shift;
    const double residual = drop_first_row(full).norm();
    const double bound =
        tol::full_residual *
        (1.0 + std::pow(lambda, family.sigma_bar + 1)) * std::max(q_norm, 1.0);
    if (residual > bound) {
      std::ostringstream msg;
      msg << "full transform residual " << residual << " at lambda = " << lambda
          << " exceeds bound " << bound;
      throw std::runtime_error(msg.str());
    }
    const double scaled =
        residual / ((1.0 + std::pow(lambda, family.sigma_bar + 1)) *
                    std::max(q_norm, 1.0));
    worst = std::max(worst, scaled);
  }
  return worst;
}

TransformFamily solve_transform_least_squares(const PlantSpec& spec) {
  require_valid(spec);
  const int m = spec.m;
  if (m > 5) {
    throw std::invalid_argument(
        "least-squares transform construction is meant for m <= 5");
  }
  const Matrix& q = spec.reaction;
  const Vector& d = spec.diffusion;

  const SigmaIndex idx = sigma_index(spec);
  TransformFamily family;
  family.m = m;
  family.sigma = idx.sigma;
  family.sigma_bar = idx.sigma_bar;

  Matrix tbar_prev = Matrix::Identity(m, m);
  for (int i = 1; i <= family.sigma_bar; ++i) {
    const int shift = tbar_col_shift(i);
    const int row_limit = tbar_row_limit(m, i);

    // Collect the pattern positions as the unknown vector.
    std::vector<std::pair<int, int>> slots;  // 0-based (row, col)
    for (int j = 1; j <= row_limit; ++j) {
      for (int k = j + shift; k <= m; ++k) {
        slots.emplace_back(j - 1, k - 1);
      }
    }

    // Rows of the linear system: every entry of the projected equation.
    const int eq_rows = (m - 1) * m;
    Matrix system = Matrix::Zero(eq_rows, static_cast<int>(slots.size()));
    Vector rhs = Vector::Zero(eq_rows);

    const Matrix constant = drop_first_row(
        sylvester_lhs(q, d, Matrix::Zero(m, m), tbar_prev));
    int eq = 0;
    for (int r = 1; r < m; ++r) {
      for (int c = 0; c < m; ++c, ++eq) {
        rhs[eq] = -constant(r, c);
        for (std::size_t s = 0; s < slots.size(); ++s) {
          const auto [sr, sc] = slots[s];
          double coef = 0.0;
          if (sc == c) coef += q(r, sr);   // from Q Tbar
          if (sr == r) coef -= q(sc, c);   // from -Tbar Q
          system(eq, static_cast<int>(s)) = coef;
        }
      }
    }

    Eigen::ColPivHouseholderQR<Matrix> qr(system);
    if (qr.rank() < static_cast<Eigen::Index>(slots.size())) {
      throw std::runtime_error(
          "least-squares transform construction: pattern unknowns are rank "
          "deficient, contradicting the controllability condition");
    }
    const Vector solution = qr.solve(rhs);
    const double residual = (system * solution - rhs).norm();
    if (residual > 1e-8 * (1.0 + rhs.norm())) {
      throw std::runtime_error(
          "least-squares transform construction: equations are inconsistent "
          "over the staircase pattern");
    }

    Matrix tbar = Matrix::Zero(m, m);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      tbar(slots[s].first, slots[s].second) = solution[static_cast<int>(s)];
    }
    family.tbars.push_back(tbar);
    tbar_prev = tbar;
  }
  return family;
}

}  // namespace cascade
