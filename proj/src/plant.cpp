#include "cascade/plant.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cascade/linalg.hpp"

namespace cascade {

const char* to_string(BcKind kind) {
  switch (kind) {
    case BcKind::NN: return "NN";
    case BcKind::ND: return "ND";
    case BcKind::DN: return "DN";
    case BcKind::DD: return "DD";
  }
  return "?";
}

const char* to_string(ActuationMode mode) {
  return mode == ActuationMode::Internal ? "internal" : "boundary";
}

BcKind PlantSpec::bc_kind() const {
  const bool left_dirichlet = gamma11 == 1.0;
  const bool right_dirichlet = gamma21 == 1.0;
  if (left_dirichlet) return right_dirichlet ? BcKind::DD : BcKind::DN;
  return right_dirichlet ? BcKind::ND : BcKind::NN;
}

Vector PlantSpec::input_column() const {
  Vector b = Vector::Zero(m);
  if (m > 0) b[0] = 1.0;
  return b;
}

std::vector<std::string> validate(const PlantSpec& spec) {
  std::vector<std::string> violations;
  auto report = [&violations](const std::string& msg) {
    violations.push_back(msg);
  };

  if (spec.m < 2) report("m must be at least 2");
  if (!(spec.length > 0.0)) report("domain length must be positive");

  if (spec.diffusion.size() != spec.m) {
    report("diffusion coefficient count does not match m");
  } else {
    for (int i = 0; i < spec.m; ++i) {
      if (!(spec.diffusion[i] > 0.0)) {
        std::ostringstream msg;
        msg << "diffusion coefficient d_" << i + 1 << " must be positive";
        report(msg.str());
      }
    }
  }

  if (spec.reaction.rows() != spec.m || spec.reaction.cols() != spec.m) {
    report("reaction matrix must be m x m");
  } else {
    for (int i = 0; i < spec.m; ++i) {
      for (int j = 0; j < spec.m; ++j) {
        if (i >= j + 2 && spec.reaction(i, j) != 0.0) {
          std::ostringstream msg;
          msg << "cascade structure at (" << i + 1 << "," << j + 1
              << "): entry below the subdiagonal must be zero";
          report(msg.str());
        }
      }
    }
    for (int i = 0; i + 1 < spec.m; ++i) {
      if (spec.reaction(i + 1, i) == 0.0) {
        std::ostringstream msg;
        msg << "controllability condition at (" << i + 2 << "," << i + 1
            << "): subdiagonal entry must be nonzero";
        report(msg.str());
      }
    }
    if (!spec.reaction.allFinite()) report("reaction matrix has non-finite entries");
  }

  auto is_zero_or_one = [](double g) { return g == 0.0 || g == 1.0; };
  if (!is_zero_or_one(spec.gamma11) || !is_zero_or_one(spec.gamma21) ||
      spec.gamma12 != 1.0 - spec.gamma11 || spec.gamma22 != 1.0 - spec.gamma21) {
    report(
        "boundary coefficients must be one of the four Dirichlet/Neumann "
        "combinations (gamma11, gamma21 in {0,1}, gamma12 = 1-gamma11, "
        "gamma22 = 1-gamma21); general Robin coefficients are not supported");
  }

  if (spec.mode == ActuationMode::Boundary && !spec.shapes.empty()) {
    report("boundary mode takes no shape functions");
  }
  for (std::size_t j = 0; j < spec.shapes.size(); ++j) {
    if (const auto* ind = std::get_if<IndicatorShape>(&spec.shapes[j])) {
      if (!(0.0 <= ind->a && ind->a <= ind->b && ind->b <= spec.length)) {
        std::ostringstream msg;
        msg << "shape " << j + 1 << ": indicator interval must satisfy 0 <= a "
            << "<= b <= length";
        report(msg.str());
      }
    } else if (const auto* sampled = std::get_if<SampledShape>(&spec.shapes[j])) {
      if (sampled->values.size() < 101) {
        std::ostringstream msg;
        msg << "shape " << j + 1 << ": sampled shapes need at least 101 points";
        report(msg.str());
      }
    }
  }

  return violations;
}

void require_valid(const PlantSpec& spec) {
  const auto violations = validate(spec);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid plant:";
    for (const auto& v : violations) msg << "\n  - " << v;
    throw std::invalid_argument(msg.str());
  }
}

SigmaIndex sigma_index(const PlantSpec& spec) {
  const int m = spec.m;
  auto matches = [&spec](double a, double b) {
    if (spec.diffusion_match_rtol <= 0.0) return a == b;
    return std::abs(a - b) <=
           spec.diffusion_match_rtol * std::max(std::abs(a), std::abs(b));
  };

  int sigma = m;
  for (int i = m - 1; i >= 1; --i) {
    // sigma is 1-based: position i covers d_i..d_m.
    if (matches(spec.diffusion[i - 1], spec.diffusion[m - 1])) {
      sigma = i;
    } else {
      break;
    }
  }
  const int bar = std::min(2 * sigma - 3, 2 * m - 4);
  return SigmaIndex{sigma, std::max(0, bar)};
}

Matrix stabilizability_matrix(const PlantSpec& spec, double k_q, double delta0,
                              double lambda1) {
  const int m = spec.m;
  Vector rates(m);
  rates[0] = k_q;
  for (int i = 1; i < m; ++i) rates[i] = lambda1;
  return linalg::sym(spec.reaction) -
         Matrix(spec.diffusion.asDiagonal()) * Matrix(rates.asDiagonal()) +
         delta0 * Matrix::Identity(m, m);
}

double check_boundary_stabilizability(const PlantSpec& spec, double delta0,
                                      double lambda1) {
  const int m = spec.m;
  // Necessity screen: the trailing block does not depend on k_q. If it is not
  // negative definite no k_q can work (Schur complement argument).
  const Matrix trailing =
      stabilizability_matrix(spec, 1.0, delta0, lambda1).bottomRightCorner(m - 1, m - 1);
  if (!linalg::is_negative_definite(trailing, 0.0)) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(trailing, Eigen::EigenvaluesOnly);
    std::ostringstream msg;
    msg << "boundary stabilizability fails for this (Q, D, delta0): the "
        << "trailing block has eigenvalue " << solver.eigenvalues().maxCoeff()
        << " >= 0, so no k_q can make the full matrix negative definite";
    throw std::runtime_error(msg.str());
  }

  auto feasible = [&](double k_q) {
    const Matrix s = stabilizability_matrix(spec, k_q, delta0, lambda1);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(s, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().maxCoeff() <= -tol::definiteness_margin;
  };

  double hi = 1.0;
  int doublings = 0;
  while (!feasible(hi)) {
    hi *= 2.0;
    if (++doublings > 60) {
      throw std::runtime_error(
          "boundary stabilizability: no feasible k_q found up to 2^60");
    }
  }
  double lo = 0.0;
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi * 1.05;  // headroom for the strict inequalities downstream
}

}  // namespace cascade
