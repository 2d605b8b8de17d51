#include <gtest/gtest.h>

#include <cmath>

#include "perturbkit/eigensolver.hpp"
#include "perturbkit/errors.hpp"

using namespace perturbkit;

namespace {

OperatorModel square() { return OperatorModel::multiplication(2.0, 1.0); }

PerturbationSpec point_spec(Complex alpha) {
  return PerturbationSpec(OperatorModel::laplace_line(), ScaleVector::delta(0.0), ScaleVector::delta(0.0), alpha);
}

}  // namespace

TEST(FindEigenvalues, PointInteractionBoundState) {
  for (Complex alpha : {Complex(-1.0, 0.0), Complex(-2.0, 0.5), Complex(-1.5, -0.3)}) {
    const auto spec = point_spec(alpha);
    const Complex expected = -alpha * alpha / 4.0;
    SearchRegion region{expected.real() - 1.0, std::min(expected.real() + 1.0, -0.01), 0.0, 0.0};
    if (alpha.imag() != 0.0) {
      region.im_min = expected.imag() > 0.0 ? 1e-3 : expected.imag() - 1.0;
      region.im_max = expected.imag() > 0.0 ? expected.imag() + 1.0 : -1e-3;
    }
    const auto found = find_eigenvalues(spec, region);
    ASSERT_EQ(found.size(), 1u) << alpha;
    EXPECT_NEAR(std::abs(found[0].lambda - expected), 0.0, 1e-10);
    EXPECT_LT(verify_eigen(spec, found[0]), 1e-7);
  }
}

TEST(FindEigenvalues, RepulsivePointInteractionHasNone) {
  EXPECT_TRUE(find_eigenvalues(point_spec(1.0), SearchRegion::interval(-5.0, -0.01)).empty());
}

TEST(FindEigenvalues, ZeroMarkerHasNone) {
  const auto spec = point_spec(1.0);
  const PerturbationSpec zero(spec.op(), spec.omega1(), spec.omega2(), std::nullopt);
  EXPECT_TRUE(find_eigenvalues(zero, SearchRegion::interval(-5.0, -0.01)).empty());
  EXPECT_TRUE(std::isinf(eigen_condition(zero, -1.0).real()));
}

TEST(FindEigenvalues, RegionTouchingSpectrumIsRejected) {
  try {
    find_eigenvalues(point_spec(-1.0), SearchRegion::interval(-1.0, 0.5));
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RegionTouchesSpectrum);
  }
}

TEST(DualPair, ExponentialPairOnTheLine) {
  const auto op = OperatorModel::laplace_line();
  const auto pair = dual_pair(op, -1.0, ScaleVector::exp_abs(1.0, 1.0), ScaleVector::exp_abs(1.0, -1.0));
  EXPECT_NEAR(pair.lambda.real(), -1.0 / 13.0, 1e-12);
  EXPECT_NEAR(pair.lambda.imag(), 0.0, 1e-14);
  EXPECT_LT(pair.condition_mu, 1e-9);
  EXPECT_LT(pair.condition_lambda, 1e-9);
  EXPECT_LT(pair.pairing_residual, 1e-12);

  const auto found = find_eigenvalues(pair.spec, SearchRegion::interval(-2.0, -0.01));
  ASSERT_EQ(found.size(), 2u);
  EXPECT_NEAR(found[0].lambda.real(), -1.0, 1e-10);
  EXPECT_NEAR(found[1].lambda.real(), -1.0 / 13.0, 1e-10);
  for (const auto& p : found) EXPECT_LT(verify_eigen(pair.spec, p), 1e-7);
  EXPECT_LT(eigenvector_deviation(op, found[1].phi, pair.phi_lambda), 1e-6);
}

TEST(InverseProblem, EmbeddedEigenvalueRoundTrip) {
  const auto op = square();
  const auto phi = ScaleVector::power_law(-4.0 / 3.0);
  const auto psi = ScaleVector::power_law(-5.0 / 3.0);
  const auto problem = inverse_problem(op, 2.0, phi, psi);
  EXPECT_EQ(problem.spec.tau_policy().kind, TauPolicy::Kind::Explicit);

  EigenSearchOptions options;
  options.embedded = true;
  const auto found = find_eigenvalues(problem.spec, SearchRegion::interval(1.5, 2.5), {}, options);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_NEAR(found[0].lambda.real(), 2.0, 1e-9);
  EXPECT_TRUE(found[0].embedded);
  EXPECT_LT(verify_eigen(problem.spec, found[0]), 1e-7);
  EXPECT_LT(eigenvector_deviation(op, found[0].phi, phi), 1e-6);
  EXPECT_LT(eigenvector_deviation(op, found[0].psi, psi), 1e-6);
}

TEST(InverseProblem, AutoTauWhenBothVectorsAreInHPlusOne) {
  const auto op = square();
  const auto problem =
      inverse_problem(op, 1.5, ScaleVector::power_law(-7.0 / 3.0), ScaleVector::power_law(-8.0 / 3.0));
  EXPECT_EQ(problem.spec.tau_policy().kind, TauPolicy::Kind::Auto);
  ASSERT_TRUE(problem.spec.alpha().has_value());
  EXPECT_NEAR(problem.spec.alpha()->real(), -8.0, 1e-9);
  EXPECT_NEAR(problem.spec.alpha()->imag(), 0.0, 1e-12);

  EigenSearchOptions options;
  options.embedded = true;
  const auto found = find_eigenvalues(problem.spec, SearchRegion::interval(1.2, 1.8), {}, options);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_NEAR(found[0].lambda.real(), 1.5, 1e-9);
}

TEST(InverseProblem, KreinDataAgreesWithDirectConstruction) {
  const auto problem =
      inverse_problem(square(), 2.0, ScaleVector::power_law(-4.0 / 3.0), ScaleVector::power_law(-5.0 / 3.0));
  for (Complex z : {Complex(-1.0, 0.0), Complex(0.5, 2.0), Complex(3.0, -1.0)}) {
    const auto direct = b_of_z(problem.spec, z);
    const auto rebuilt = inverse_krein_data(problem, z);
    EXPECT_NEAR(std::abs(rebuilt.b_z.value - direct.value), 0.0, 1e-8 * (1.0 + std::abs(direct.value))) << z;
  }
}

TEST(InverseProblem, RejectsVectorsOutsideH) {
  try {
    inverse_problem(square(), 2.0, ScaleVector::power_law(-0.4), ScaleVector::power_law(-5.0 / 3.0));
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RegularityViolation);
  }
}

TEST(VerifyEigen, DetectsAWrongEigenvalue) {
  const auto spec = point_spec(-1.0);
  auto pair = make_eigen_pair(spec, -0.25, 0.0);
  EXPECT_LT(verify_eigen(spec, pair), 1e-9);
  pair = make_eigen_pair(spec, -0.3, 0.0);
  EXPECT_GT(verify_eigen(spec, pair), 1e-3);
}
