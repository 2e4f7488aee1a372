#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cascade/types.hpp"

namespace cascade {

enum class ActuationMode { Internal, Boundary };

/// Boundary-condition pattern, first letter left end, second letter right
/// end (N = Neumann, D = Dirichlet).
enum class BcKind { NN, ND, DN, DD };

const char* to_string(BcKind kind);
const char* to_string(ActuationMode mode);

/// Characteristic function of [a, b], 0 <= a <= b <= length.
struct IndicatorShape {
  double a = 0.0;
  double b = 0.0;
};

/// Values on a uniform grid over [0, length], at least 101 points.
struct SampledShape {
  std::vector<double> values;
};

using ShapeFn = std::variant<IndicatorShape, SampledShape>;

/// The coupled reaction-diffusion plant: m equations on (0, length) with a
/// diagonal diffusion matrix, a cascade reaction matrix (nonzero subdiagonal,
/// zero below it), and a single scalar control channel entering the first
/// equation either through in-domain shape functions or through the right
/// boundary condition.
struct PlantSpec {
  int m = 0;
  double length = 0.0;
  Vector diffusion;  // d_1..d_m, all > 0
  Matrix reaction;   // m x m cascade matrix
  ActuationMode mode = ActuationMode::Internal;
  // Boundary coefficients, restricted to the Dirichlet/Neumann set:
  // gamma11, gamma21 in {0, 1}, gamma12 = 1 - gamma11, gamma22 = 1 - gamma21.
  double gamma11 = 0.0;
  double gamma12 = 1.0;
  double gamma21 = 1.0;
  double gamma22 = 0.0;
  std::vector<ShapeFn> shapes;  // internal mode only

  // Optional relative tolerance for treating two configured diffusion
  // coefficients as equal when computing the distinctness index. Defaults to
  // exact equality; a silent tolerance could change the transform degree.
  double diffusion_match_rtol = 0.0;

  BcKind bc_kind() const;
  Vector input_column() const;  // e_1
};

/// Checks every structural invariant and returns one message per violation
/// (empty means valid): cascade sparsity, nonzero subdiagonal, positive
/// diffusion, supported boundary coefficients, shape sanity.
std::vector<std::string> validate(const PlantSpec& spec);

/// Throwing wrapper around validate() for call sites that need a valid spec.
void require_valid(const PlantSpec& spec);

struct SigmaIndex {
  int sigma = 0;      // smallest i with d_i = d_j for all j >= i
  int sigma_bar = 0;  // min{2 sigma - 3, 2m - 4}, floored at 0
};

SigmaIndex sigma_index(const PlantSpec& spec);

/// Sym(Q) - D diag{k_q, lambda1, ..., lambda1} + delta0 I, the matrix whose
/// negative definiteness makes the boundary problem stabilizable at rate
/// delta0.
Matrix stabilizability_matrix(const PlantSpec& spec, double k_q, double delta0,
                              double lambda1);

/// Smallest k_q (bisection to relative tolerance 1e-6, then +5% headroom)
/// making stabilizability_matrix negative semidefinite. Feasibility is
/// pre-screened on the trailing (m-1)x(m-1) block, which k_q cannot
/// influence. Throws when infeasible for this (Q, D, delta0).
double check_boundary_stabilizability(const PlantSpec& spec, double delta0,
                                      double lambda1);

}  // namespace cascade
