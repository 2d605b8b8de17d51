#include <gtest/gtest.h>

#include "perturbkit/laplace_kernel.hpp"
#include "perturbkit/rational.hpp"

using namespace perturbkit;

TEST(SpectralRational, EvaluatesFactoredForm) {
  auto r = SpectralRational::constant(2.0) * SpectralRational::shift(1.0) * SpectralRational::resolvent(-1.0);
  EXPECT_NEAR(std::abs(r(3.0) - Complex(1.0, 0.0)), 0.0, 1e-15);
  EXPECT_EQ(r.degree(), 0);
}

TEST(SpectralRational, CancelsCoincidentZeroAndPole) {
  const Complex z(2.0, 0.0);
  auto r = SpectralRational::shift(z) * SpectralRational::resolvent(z);
  EXPECT_TRUE(r.is_identity());
}

TEST(SpectralRational, AdjointConjugatesAndFlipsBoundarySide) {
  auto r = SpectralRational::resolvent(Complex(1.0, 0.0));
  auto adj = r.adjoint();
  EXPECT_TRUE(std::signbit(adj.poles()[0].imag()));
  auto q = SpectralRational::linear(Complex(1.0, 2.0), Complex(0.0, 1.0));
  const Complex l(0.3, -0.7);
  EXPECT_NEAR(std::abs(q.adjoint()(l) - std::conj(q(std::conj(l)))), 0.0, 1e-15);
}

TEST(SpectralRational, ZeroScaleDropsFactors) {
  auto r = SpectralRational::resolvent(3.0) * Complex(0.0, 0.0);
  EXPECT_TRUE(r.is_zero());
  EXPECT_TRUE(r.poles().empty());
}

TEST(PartialFractions, ReconstructsRepeatedPoles) {
  auto r = SpectralRational::constant(Complex(1.5, -0.5)) * SpectralRational::shift(Complex(0.2, 0.1)) *
           SpectralRational::resolvent(1.0) * SpectralRational::resolvent(1.0) *
           SpectralRational::resolvent(Complex(-2.0, 0.5)) * SpectralRational::resolvent(Complex(-2.0, 0.5)) *
           SpectralRational::resolvent(Complex(-2.0, 0.5));
  const auto terms = partial_fractions(r);
  for (Complex l : {Complex(0.3, 0.9), Complex(-5.0, 1.0), Complex(7.0, -3.0)}) {
    Complex sum(0.0, 0.0);
    for (const auto& t : terms)
      for (std::size_t j = 0; j < t.coefficients.size(); ++j)
        sum += t.coefficients[j] / std::pow(l - t.pole, static_cast<int>(j + 1));
    EXPECT_NEAR(std::abs(sum - r(l)), 0.0, 1e-13 * (1.0 + std::abs(r(l))));
  }
}

TEST(KernelContract, LineResolventAtCoincidentPoints) {
  // (2 pi)^-1 \int dk / (k^2 + 1) = 1/2 and \int dk / (k^2 + 1)^2 / (2 pi) = 1/4.
  EXPECT_NEAR(kernel_contract(SpectralRational::resolvent(-1.0), 0.0, 1).real(), 0.5, 1e-15);
  auto sq = SpectralRational::resolvent(-1.0) * SpectralRational::resolvent(-1.0);
  EXPECT_NEAR(kernel_contract(sq, 0.0, 1).real(), 0.25, 1e-15);
  // (1 + d) e^{-d} / 4 at distance d.
  EXPECT_NEAR(kernel_contract(sq, 2.0, 1).real(), 3.0 * std::exp(-2.0) / 4.0, 1e-15);
}

TEST(KernelContract, SpaceResolventMatchesFreeKernel) {
  const double r = 1.0;
  EXPECT_NEAR(kernel_contract(SpectralRational::resolvent(-1.0), r, 3).real(),
              std::exp(-1.0) / (4.0 * M_PI), 1e-15);
}

TEST(KernelContract, BoundaryPoleIsLimitFromHalfPlane) {
  const double d = 0.7;
  auto exact = kernel_contract(SpectralRational::resolvent(Complex(2.0, 0.0)) *
                                   SpectralRational::resolvent(-1.0),
                               d, 1, true);
  auto near = kernel_contract(SpectralRational::resolvent(Complex(2.0, 1e-9)) *
                                  SpectralRational::resolvent(-1.0),
                              d, 1);
  EXPECT_NEAR(std::abs(exact - near), 0.0, 1e-8);
  auto lower = kernel_contract(SpectralRational::resolvent(Complex(2.0, -0.0)) *
                                   SpectralRational::resolvent(-1.0),
                               d, 1, true);
  EXPECT_NEAR(std::abs(lower - std::conj(exact)), 0.0, 1e-14);
}

TEST(KernelContract, RejectsDivergentWeights) {
  EXPECT_THROW(kernel_contract(SpectralRational{}, 0.0, 1), std::runtime_error);
  EXPECT_THROW(kernel_contract(SpectralRational::resolvent(-1.0), 0.0, 3), std::runtime_error);
  EXPECT_THROW(kernel_contract(SpectralRational::resolvent(1.0), 0.0, 1), std::runtime_error);
}

TEST(KernelContract, NearlyCoincidentPolesStayAccurate) {
  // 1/((l + 1)(l + 1 + h)) -> 1/(l + 1)^2 as h -> 0.
  auto limit = kernel_contract(SpectralRational::resolvent(-1.0) * SpectralRational::resolvent(-1.0), 0.7, 1);
  for (double h : {1e-6, 1e-9, 1e-12, 1e-15}) {
    auto w = SpectralRational::resolvent(-1.0) * SpectralRational::resolvent(-1.0 - h);
    EXPECT_NEAR(std::abs(kernel_contract(w, 0.7, 1) - limit), 0.0, 1e-12 + 10.0 * h) << h;
  }
  auto w3 = SpectralRational::resolvent(-1.0) * SpectralRational::resolvent(-1.0 - 1e-13) *
            SpectralRational::resolvent(Complex(-2.0, 1.0));
  auto l3 = SpectralRational::resolvent(-1.0) * SpectralRational::resolvent(-1.0) *
            SpectralRational::resolvent(Complex(-2.0, 1.0));
  EXPECT_NEAR(std::abs(kernel_contract(w3, 0.0, 3) - kernel_contract(l3, 0.0, 3)), 0.0, 1e-12);
}
