#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cascade/linalg.hpp"
#include "cascade/plant.hpp"
#include "oracles.hpp"

using namespace cascade;

namespace {

PlantSpec example_internal() {
  PlantSpec spec;
  spec.m = 3;
  spec.length = 3.141592653589793;
  spec.diffusion = Vector(3);
  spec.diffusion << 4, 3, 6;
  spec.reaction = Matrix(3, 3);
  spec.reaction << 10, 4, 8, 1, 10, 2, 0, 1, 20;
  spec.mode = ActuationMode::Internal;
  spec.gamma11 = 0.0;
  spec.gamma12 = 1.0;
  spec.gamma21 = 1.0;
  spec.gamma22 = 0.0;
  spec.shapes = {IndicatorShape{0.1, 0.2}, IndicatorShape{0.2, 0.3},
                 IndicatorShape{0.3, 0.4}};
  return spec;
}

PlantSpec example_boundary() {
  PlantSpec spec;
  spec.m = 3;
  spec.length = 3.141592653589793;
  spec.diffusion = Vector(3);
  spec.diffusion << 4, 5, 6;
  spec.reaction = Matrix(3, 3);
  spec.reaction << 10, 1, 8, 1, -10, 2, 0, -10, -20;
  spec.mode = ActuationMode::Boundary;
  spec.gamma11 = 0.0;
  spec.gamma12 = 1.0;
  spec.gamma21 = 1.0;
  spec.gamma22 = 0.0;
  return spec;
}

}  // namespace

TEST_CASE("the example plant validates cleanly") {
  CHECK(validate(example_internal()).empty());
  CHECK(validate(example_boundary()).empty());
}

TEST_CASE("zero subdiagonal is reported with its position") {
  PlantSpec spec = example_internal();
  spec.reaction(1, 0) = 0.0;
  const auto violations = validate(spec);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("(2,1)") != std::string::npos);
  CHECK(violations[0].find("controllability") != std::string::npos);
}

TEST_CASE("entries below the subdiagonal are reported") {
  PlantSpec spec = example_internal();
  spec.reaction(2, 0) = 5.0;
  const auto violations = validate(spec);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("cascade structure at (3,1)") != std::string::npos);
}

TEST_CASE("robin boundary coefficients are rejected") {
  PlantSpec spec = example_internal();
  spec.gamma11 = 0.3;
  spec.gamma12 = 0.7;
  const auto violations = validate(spec);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("Robin") != std::string::npos);
}

TEST_CASE("diffusion distinctness index") {
  PlantSpec spec = example_internal();
  SigmaIndex idx = sigma_index(spec);
  CHECK(idx.sigma == 3);
  CHECK(idx.sigma_bar == 2);  // min{2*3-3, 2*3-4}

  spec.diffusion << 2, 2, 2;
  idx = sigma_index(spec);
  CHECK(idx.sigma == 1);
  CHECK(idx.sigma_bar == 0);

  PlantSpec four = spec;
  four.m = 4;
  four.diffusion = Vector(4);
  four.diffusion << 1, 5, 5, 5;
  four.reaction = Matrix::Zero(4, 4);
  for (int i = 0; i + 1 < 4; ++i) four.reaction(i + 1, i) = 1.0;
  idx = sigma_index(four);
  CHECK(idx.sigma == 2);
  CHECK(idx.sigma_bar == 1);
}

TEST_CASE("appending a duplicate trailing diffusion never raises sigma") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const PlantSpec spec = oracles::random_cascade(rng, 4);
    PlantSpec extended = spec;
    extended.m = 5;
    extended.diffusion = Vector(5);
    extended.diffusion.head(4) = spec.diffusion;
    extended.diffusion[4] = spec.diffusion[3];
    extended.reaction = Matrix::Zero(5, 5);
    extended.reaction.topLeftCorner(4, 4) = spec.reaction;
    extended.reaction(4, 3) = 1.0;
    CHECK(sigma_index(extended).sigma <= sigma_index(spec).sigma);
  }
}

TEST_CASE("near-equal diffusions split exactly unless a tolerance is set") {
  PlantSpec spec = example_internal();
  spec.diffusion << 4, 6.0 * (1.0 + 1e-12), 6.0;
  CHECK(sigma_index(spec).sigma == 3);
  spec.diffusion_match_rtol = 1e-9;
  CHECK(sigma_index(spec).sigma == 2);
}

TEST_CASE("stabilizability matrix for the boundary example") {
  const PlantSpec spec = example_boundary();
  const Matrix s = stabilizability_matrix(spec, 10.0, 9.0, 0.25);
  Matrix expected(3, 3);
  expected << -21, 1, 4, 1, -2.25, -4, 4, -4, -12.5;
  CHECK((s - expected).norm() < 1e-12);
  CHECK(linalg::is_negative_definite(s, 0.0));
  // leading principal minors alternate as the oracle predicts
  CHECK(s(0, 0) == doctest::Approx(-21.0));
  CHECK(s.topLeftCorner(2, 2).determinant() == doctest::Approx(46.25));
  CHECK(s.determinant() == doctest::Approx(-238.125));
}

TEST_CASE("smallest feasible boundary gain") {
  const PlantSpec spec = example_boundary();
  const double k_q = check_boundary_stabilizability(spec, 9.0, 0.25);
  // infimum is near 5.09; the returned value carries 5% headroom
  CHECK(k_q > 5.09);
  CHECK(k_q < 5.6);
  const Matrix at_returned = stabilizability_matrix(spec, k_q, 9.0, 0.25);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(at_returned,
                                               Eigen::EigenvaluesOnly);
  CHECK(solver.eigenvalues().maxCoeff() <= 1e-9);
}

TEST_CASE("the in-domain example reaction term is boundary-infeasible") {
  PlantSpec spec = example_internal();
  spec.mode = ActuationMode::Boundary;
  spec.shapes.clear();
  CHECK_THROWS_WITH_AS(check_boundary_stabilizability(spec, 9.0, 0.25),
                       doctest::Contains("trailing block"), std::runtime_error);
}

TEST_CASE("strongly dissipative reaction terms need only a small gain") {
  PlantSpec spec = example_boundary();
  spec.reaction = -10.0 * Matrix::Identity(3, 3);
  spec.reaction(1, 0) = spec.reaction(2, 1) = 1.0;
  const double k_q = check_boundary_stabilizability(spec, 1.0, 0.25);
  CHECK(k_q < 3.0);
}

TEST_CASE("returned gain is monotone in the decay target") {
  const PlantSpec spec = example_boundary();
  double previous = 0.0;
  for (double delta0 : {1.0, 3.0, 5.0, 7.0, 9.0}) {
    const double k_q = check_boundary_stabilizability(spec, delta0, 0.25);
    CHECK(k_q >= previous - 1e-9);
    previous = k_q;
  }
}
