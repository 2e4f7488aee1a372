#include "cascade/sim.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cascade/linalg.hpp"

namespace cascade {

namespace {

void require_truncation(int n_sim, int n_modes, const char* who) {
  if (n_sim < n_modes) {
    std::ostringstream msg;
    msg << who << ": truncation " << n_sim << " cannot be below the "
        << "controlled mode count " << n_modes;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

ClosedLoopSystem assemble_internal(const PlantSpec& spec,
                                   const InternalController& ctrl,
                                   const SpectralBasis& basis, int n_sim) {
  require_truncation(n_sim, ctrl.n_modes, "assemble_internal");
  const int m = spec.m;
  const int n_ctl = ctrl.n_modes;
  const Matrix& q = spec.reaction;
  const Matrix diff = Matrix(spec.diffusion.asDiagonal());

  ClosedLoopSystem sys;
  sys.mode = ActuationMode::Internal;
  sys.m = m;
  sys.n_modes = n_ctl;
  sys.n_sim = n_sim;
  sys.a = Matrix::Zero(m * n_sim, m * n_sim);

  for (int n = 1; n <= n_sim; ++n) {
    const int at = sys.mode_offset(n);
    sys.a.block(at, at, m, m) = -basis.eigenvalue(n) * diff + q;

    // u = K Z^(N) enters the first component through the shape projections;
    // for n > N this is exactly the spillover forcing.
    RowVector bn(n_ctl);
    for (int j = 1; j <= n_ctl; ++j) {
      bn[j - 1] = project_shape(basis, spec.shapes[j - 1], n);
    }
    sys.a.block(at, 0, 1, m * n_ctl) += bn * ctrl.k;
  }

  sys.control_map = Matrix::Zero(n_ctl, m * n_sim);
  sys.control_map.leftCols(m * n_ctl) = ctrl.k;
  return sys;
}

ClosedLoopSystem assemble_boundary(const PlantSpec& spec,
                                   const BoundaryController& ctrl,
                                   const SpectralBasis& basis, int n_sim) {
  require_truncation(n_sim, ctrl.n_modes, "assemble_boundary");
  const int m = spec.m;
  const int n_ctl = ctrl.n_modes;
  const int wdim = m * n_sim;
  const int xdim = m * n_ctl;
  const Matrix& q = spec.reaction;
  const Matrix diff = Matrix(spec.diffusion.asDiagonal());
  const double d1 = spec.diffusion[0];
  const Vector qb = q.col(0);  // Q B for the cascade input column

  ClosedLoopSystem sys;
  sys.mode = ActuationMode::Boundary;
  sys.m = m;
  sys.n_modes = n_ctl;
  sys.n_sim = n_sim;

  sys.lifts.reserve(n_ctl);
  for (int j = 0; j < n_ctl; ++j) {
    sys.lifts.push_back(psi_function(basis, ctrl.mus[j]));
  }
  sys.psi_proj.resize(n_sim, n_ctl);
  for (int n = 1; n <= n_sim; ++n) {
    for (int j = 0; j < n_ctl; ++j) {
      sys.psi_proj(n - 1, j) = project_psi(basis, sys.lifts[j], n);
    }
  }

  sys.a = Matrix::Zero(wdim + xdim, wdim + xdim);

  // Controller-state law: drift plus the mode feedback, with the modal
  // projections of z expanded as w plus the lifting contribution of u:
  // z_n = w_n + B <Psi_n, u>, stacked as Z = W + Xi X.
  Matrix xi = Matrix::Zero(m * n_ctl, xdim);
  for (int mode = 0; mode < n_ctl; ++mode) {
    xi.block(mode * m, 0, 1, n_ctl) = ctrl.psi.row(mode);
  }
  Matrix a_xx = ctrl.h;
  a_xx.topRows(n_ctl) += ctrl.k * (ctrl.theta - xi);
  Matrix a_xw = Matrix::Zero(xdim, wdim);
  a_xw.topLeftCorner(n_ctl, m * n_ctl) = -ctrl.k;

  sys.a.block(wdim, wdim, xdim, xdim) = a_xx;
  sys.a.block(wdim, 0, xdim, wdim) = a_xw;

  // udot resolved through the law just assembled; never differenced.
  const Matrix u_rows_x = a_xx.topRows(n_ctl);   // n_ctl x xdim
  const Matrix u_rows_w = a_xw.topRows(n_ctl);   // n_ctl x wdim

  for (int n = 1; n <= n_sim; ++n) {
    const int at = sys.mode_offset(n);
    sys.a.block(at, at, m, m) += -basis.eigenvalue(n) * diff + q;

    const RowVector pn = sys.psi_proj.row(n - 1);  // psi projections at mode n

    // Forcing by u itself: (QB - d1 mu-weighted B) psi-projections.
    RowVector u_to_x = RowVector::Zero(xdim);
    u_to_x.head(n_ctl) = pn;  // u occupies the first block of X
    for (int i = 0; i < m; ++i) {
      sys.a.block(at + i, wdim, 1, xdim) += qb[i] * u_to_x;
    }
    RowVector mu_weighted = RowVector::Zero(xdim);
    mu_weighted.head(n_ctl) = pn.cwiseProduct(ctrl.mus.transpose());
    sys.a.block(at, wdim, 1, xdim) -= d1 * mu_weighted;

    // Forcing by udot, resolved through the controller law.
    sys.a.block(at, wdim, 1, xdim) -= pn * u_rows_x;
    sys.a.block(at, 0, 1, wdim) -= pn * u_rows_w;
  }

  sys.control_map = Matrix::Zero(n_ctl, wdim + xdim);
  sys.control_map.block(0, wdim, n_ctl, n_ctl) =
      Matrix::Identity(n_ctl, n_ctl);
  return sys;
}

Vector initial_state(const ClosedLoopSystem& sys, const SpectralBasis& basis,
                     const InitialCondition& z0) {
  if (static_cast<int>(z0.size()) != sys.m) {
    throw std::invalid_argument("initial data must have one signal per state");
  }
  Vector state = Vector::Zero(sys.dim());
  // Boundary mode: u(0) = 0, so the w modes coincide with the z modes.
  for (int n = 1; n <= sys.n_sim; ++n) {
    state.segment(sys.mode_offset(n), sys.m) = project_initial(basis, z0, n);
  }
  return state;
}

Trajectory integrate(const ClosedLoopSystem& sys, const Vector& x0,
                     double t_final, double dt, Integrator method) {
  if (!(dt > 0.0) || !(t_final >= 0.0)) {
    throw std::invalid_argument("integrate: need dt > 0 and t_final >= 0");
  }
  if (x0.size() != sys.dim()) {
    throw std::invalid_argument("integrate: initial state dimension mismatch");
  }
  const int steps = static_cast<int>(std::llround(t_final / dt));

  Trajectory traj;
  traj.times.resize(steps + 1);
  traj.states.resize(sys.dim(), steps + 1);
  traj.controls.resize(sys.control_map.rows(), steps + 1);

  Vector x = x0;
  if (method == Integrator::Expm) {
    const Matrix phi = linalg::matrix_exponential(sys.a, dt);
    for (int k = 0; k <= steps; ++k) {
      traj.times[k] = k * dt;
      traj.states.col(k) = x;
      traj.controls.col(k) = sys.control_map * x;
      if (k < steps) x = phi * x;
    }
    return traj;
  }

  const double radius = sys.a.rows() == 0
                            ? 0.0
                            : linalg::eigenvalues(sys.a).cwiseAbs().maxCoeff();
  const double dt_max = 2.5 / std::max(radius, 1e-12);
  if (dt > dt_max) {
    std::ostringstream msg;
    msg << "rk4 step " << dt << " rejected: stability bound for this system "
        << "is " << dt_max;
    throw std::invalid_argument(msg.str());
  }
  for (int k = 0; k <= steps; ++k) {
    traj.times[k] = k * dt;
    traj.states.col(k) = x;
    traj.controls.col(k) = sys.control_map * x;
    if (k < steps) {
      const Vector k1 = sys.a * x;
      const Vector k2 = sys.a * (x + 0.5 * dt * k1);
      const Vector k3 = sys.a * (x + 0.5 * dt * k2);
      const Vector k4 = sys.a * (x + dt * k3);
      x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return traj;
}

Matrix state_norms(const ClosedLoopSystem& sys, const Trajectory& traj) {
  const int m = sys.m;
  const Eigen::Index t_count = traj.states.cols();
  Matrix norms = Matrix::Zero(m + 1, t_count);

  for (Eigen::Index t = 0; t < t_count; ++t) {
    for (int n = 1; n <= sys.n_sim; ++n) {
      Vector zn = traj.states.col(t).segment(sys.mode_offset(n), m);
      if (sys.mode == ActuationMode::Boundary) {
        zn[0] += sys.psi_proj.row(n - 1).dot(traj.controls.col(t));
      }
      for (int i = 0; i < m; ++i) norms(i, t) += zn[i] * zn[i];
    }
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      total += norms(i, t);
      norms(i, t) = std::sqrt(norms(i, t));
    }
    norms(m, t) = std::sqrt(total);
  }
  return norms;
}

FieldGrid reconstruct(const ClosedLoopSystem& sys, const Trajectory& traj,
                      const SpectralBasis& basis, int x_points, int t_stride) {
  if (x_points < 2) throw std::invalid_argument("reconstruct: need >= 2 x points");
  if (t_stride < 1) throw std::invalid_argument("reconstruct: bad stride");
  const int m = sys.m;
  const double len = basis.length();
  const Eigen::Index t_count = traj.states.cols();

  FieldGrid grid;
  for (Eigen::Index t = 0; t < t_count; t += t_stride) {
    grid.times.push_back(traj.times[t]);
  }
  grid.x.resize(x_points);
  for (int i = 0; i < x_points; ++i) {
    grid.x[i] = len * static_cast<double>(i) / (x_points - 1);
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(grid.times.size());
  grid.values.assign(m, Matrix::Zero(rows, x_points));

  Matrix phi_table(sys.n_sim, x_points);
  for (int n = 1; n <= sys.n_sim; ++n) {
    for (int i = 0; i < x_points; ++i) {
      phi_table(n - 1, i) = basis.phi(n, grid.x[i]);
    }
  }

  Eigen::Index row = 0;
  for (Eigen::Index t = 0; t < t_count; t += t_stride, ++row) {
    for (int n = 1; n <= sys.n_sim; ++n) {
      const auto zn = traj.states.col(t).segment(sys.mode_offset(n), m);
      for (int i = 0; i < m; ++i) {
        grid.values[i].row(row) += zn[i] * phi_table.row(n - 1);
      }
    }
    if (sys.mode == ActuationMode::Boundary) {
      // Lifting contribution to the first component, evaluated exactly.
      for (int j = 0; j < sys.n_modes; ++j) {
        const double uj = traj.controls(j, t);
        for (int i = 0; i < x_points; ++i) {
          grid.values[0](row, i) += uj * sys.lifts[j](grid.x[i]);
        }
      }
    }
  }

  if (sys.mode == ActuationMode::Boundary) {
    // Realized right-boundary value of the first component against the
    // applied input sum. The truncated eigenfunction series satisfies the
    // homogeneous condition exactly, so the comparison isolates the lifting;
    // the tail estimate uses the last retained mode as a proxy.
    const bool right_dirichlet =
        basis.kind() == BcKind::ND || basis.kind() == BcKind::DD;
    double worst = 0.0;
    double tail = 0.0;
    row = 0;
    for (Eigen::Index t = 0; t < t_count; t += t_stride, ++row) {
      double value = 0.0;
      for (int n = 1; n <= sys.n_sim; ++n) {
        const double w1n = traj.states(sys.mode_offset(n), t);
        value += right_dirichlet ? w1n * basis.phi(n, len)
                                 : w1n * basis.phi_deriv(n, len);
      }
      for (int j = 0; j < sys.n_modes; ++j) {
        const double uj = traj.controls(j, t);
        value += right_dirichlet ? uj * sys.lifts[j](len)
                                 : uj * sys.lifts[j].deriv(len);
      }
      const double expected = traj.controls.col(t).sum();
      worst = std::max(worst, std::abs(value - expected));
      tail = std::max(tail, std::abs(traj.states(sys.mode_offset(sys.n_sim), t)));
    }
    grid.boundary_residual = worst;
    grid.truncation_estimate = tail;
  }
  return grid;
}

DecayFit decay_rate(const Trajectory& traj, const Matrix& norms,
                    double t_begin, double t_end) {
  const Eigen::Index total_row = norms.rows() - 1;
  std::vector<double> ts, logs;
  bool truncated = false;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    if (t < t_begin || t > t_end) continue;
    const double value = norms(total_row, static_cast<Eigen::Index>(k));
    if (value <= 1e-300) {
      truncated = true;
      continue;
    }
    ts.push_back(t);
    logs.push_back(std::log(value));
  }
  if (ts.size() < 20) {
    throw std::invalid_argument(
        "decay_rate: need at least 20 usable samples in the window");
  }

  const double count = static_cast<double>(ts.size());
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    st += ts[k];
    sl += logs[k];
    stt += ts[k] * ts[k];
    stl += ts[k] * logs[k];
  }
  const double slope = (count * stl - st * sl) / (count * stt - st * st);
  const double intercept = (sl - slope * st) / count;

  DecayFit fit;
  fit.rate = -slope;
  const double initial = norms(total_row, 0);
  fit.envelope = initial > 0.0 ? std::exp(intercept) / initial : 0.0;
  fit.window_truncated = truncated;
  return fit;
}

}  // namespace cascade
