#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "perturbkit/errors.hpp"
#include "perturbkit/krein.hpp"

using namespace perturbkit;

namespace {

const double kLn3Term = (std::log(3.0) - 1.0) / 2.0;

PerturbationSpec half_line_spec(std::optional<Complex> alpha) {
  return PerturbationSpec(OperatorModel::multiplication(2.0, 2.0), ScaleVector::power_law(-1.0, -1.0),
                          ScaleVector::power_law(-1.0, 1.0), alpha);
}

PerturbationSpec singular_spec(Complex alpha, Complex tau) {
  const auto shift = SpectralRational::shift(2.0);
  return PerturbationSpec(OperatorModel::multiplication(2.0, 1.0),
                          ScaleVector::power_law(-5.0 / 3.0).filtered(shift),
                          ScaleVector::power_law(-4.0 / 3.0).filtered(shift), alpha, TauPolicy::fixed(tau));
}

PerturbationSpec point_spec(Complex alpha) {
  return PerturbationSpec(OperatorModel::laplace_line(), ScaleVector::delta(0.0), ScaleVector::delta(0.0), alpha);
}

std::vector<ScaleVector> half_line_probes() {
  return {ScaleVector::power_law(-1.0).windowed({4.0, 25.0}), ScaleVector::power_law(-2.0),
          ScaleVector::power_law(-1.5, 1.0) * Complex(0.5, 1.0)};
}

std::vector<ScaleVector> line_probes() {
  return {ScaleVector::exp_abs(1.0, 0.5), ScaleVector::exp_abs(2.0, -1.0),
          ScaleVector::exp_abs(0.5, 0.0) * Complex(0.0, 1.0)};
}

Complex form(const PerturbationSpec& spec, Complex z, const ScaleVector& f, const ScaleVector& g) {
  return pairing(spec.op(), krein_apply(spec, z, f), g, {}, spec.options());
}

}  // namespace

TEST(TauAuto, ConvergesForHMinusOneAndVanishesForZero) {
  const auto spec = half_line_spec(1.0);
  EXPECT_TRUE(std::isfinite(tau_auto(spec).real()));
  EXPECT_NEAR(std::abs(tau_auto(spec.op(), ScaleVector{}, ScaleVector{})), 0.0, 0.0);
}

TEST(TauAuto, DivergesInHMinusTwo) {
  const auto op = OperatorModel::multiplication(2.0, 1.0);
  const auto shift = SpectralRational::shift(2.0);
  try {
    tau_auto(op, ScaleVector::power_law(-5.0 / 3.0).filtered(shift), ScaleVector::power_law(-4.0 / 3.0).filtered(shift));
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonIntegrable);
  }
}

TEST(RegularizedF, SplitsTheUnregularisedPairing) {
  const auto spec = half_line_spec(1.0);
  EXPECT_NEAR(std::abs(spec.tau() + regularized_F(spec, 0.0) - kLn3Term), 0.0, 1e-9);
  for (Complex z : {Complex(-1.0, 0.0), Complex(1.0, 2.0), Complex(3.0, -0.5)}) {
    const Complex direct = pairing(spec.op(), spec.omega2(), spec.omega1(), SpectralRational::resolvent(z));
    EXPECT_NEAR(std::abs(spec.tau() + regularized_F(spec, z) - direct), 0.0, 1e-9);
  }
  EXPECT_TRUE(std::isfinite(std::abs(regularized_F(singular_spec(1.0, 0.0), -1.0))));
}

TEST(RegularizedF, StaysBoundedFarOnNegativeAxis) {
  const auto spec = singular_spec(1.0, 0.0);
  double previous = 0.0;
  for (double z : {-1e2, -1e3, -1e4}) {
    const double value = std::abs(regularized_F(spec, z));
    EXPECT_TRUE(std::isfinite(value));
    if (previous > 0.0) EXPECT_LT(value, 10.0 * previous);
    previous = value;
  }
}

TEST(BOfZ, InfiniteAtConstructedEigenvalue) {
  const auto spec = half_line_spec(-1.0 / kLn3Term);
  EXPECT_TRUE(b_of_z(spec, 0.0).infinite);
  try {
    inverse_at_zero(spec);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PerturbedEigenvalue);
  }
}

TEST(BOfZ, ZeroMarkerGivesUnperturbedResolvent) {
  const auto spec = half_line_spec(std::nullopt);
  EXPECT_EQ(b_of_z(spec, -1.0).value, Complex(0.0, 0.0));
  EXPECT_FALSE(b_of_z(spec, -1.0).infinite);
  const auto f = ScaleVector::power_law(-2.0);
  const auto direct = resolvent_apply(spec.op(), Complex(-1.0, 1.0), f);
  const auto g = ScaleVector::power_law(-1.0);
  EXPECT_EQ(pairing(spec.op(), krein_apply(spec, Complex(-1.0, 1.0), f), g), pairing(spec.op(), direct, g));
  const auto d = inverse_at_zero(spec);
  EXPECT_EQ(d.b_z.value, Complex(0.0, 0.0));
}

TEST(InverseAtZero, FiniteForGenericAlpha) {
  const auto d = inverse_at_zero(half_line_spec(1.0));
  EXPECT_FALSE(d.b_z.infinite);
  EXPECT_NEAR(std::abs(-1.0 / d.b_z.value - (1.0 + kLn3Term)), 0.0, 1e-9);
}

TEST(BOfZ, MatchesUnsplitFormInHMinusOne) {
  const auto spec = half_line_spec(Complex(0.7, -0.2));
  for (Complex z : {Complex(-1.0, 0.0), Complex(2.0, 1.0), Complex(-5.0, -3.0)}) {
    const Complex unsplit = -1.0 / (spec.alpha_inverse() + pairing(spec.op(), spec.omega2(), spec.omega1(),
                                                                   SpectralRational::resolvent(z)));
    EXPECT_NEAR(std::abs(b_of_z(spec, z).value - unsplit), 0.0, 1e-8);
  }
}

TEST(Cocycle, HoldsOnRandomPoints) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (const auto& spec : {half_line_spec(1.0), singular_spec(Complex(-1.0, 0.5), 0.3), point_spec(-1.0)}) {
    EXPECT_EQ(cocycle_residual(spec, Complex(-1.0, 1.0), Complex(-1.0, 1.0)), 0.0);
    for (int i = 0; i < 10; ++i) {
      const Complex z(u(rng) - 4.0, u(rng));
      const Complex xi(u(rng) - 4.0, u(rng));
      EXPECT_LT(cocycle_residual(spec, z, xi), 1e-8);
    }
  }
}

TEST(KreinApply, HilbertIdentity) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto check = [&](const PerturbationSpec& spec, const std::vector<ScaleVector>& probes) {
    for (int i = 0; i < 4; ++i) {
      const Complex z(u(rng) - 3.0, u(rng));
      const Complex xi(u(rng) - 3.0, u(rng));
      for (const auto& f : probes) {
        const auto& g = probes.front();
        const Complex lhs = form(spec, z, f, g) - form(spec, xi, f, g);
        const Complex rhs = (z - xi) * form(spec, z, krein_apply(spec, xi, f), g);
        EXPECT_LT(std::abs(lhs - rhs), 1e-7);
      }
    }
  };
  check(half_line_spec(Complex(2.0, 1.0)), half_line_probes());
  check(point_spec(Complex(-1.0, 0.3)), line_probes());
}

TEST(KreinApply, RefusesEigenvalue) {
  const auto spec = half_line_spec(-1.0 / kLn3Term);
  try {
    krein_apply(spec, 0.0, ScaleVector::power_law(-2.0));
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PerturbedEigenvalue);
  }
}

TEST(KreinApply, PointInteractionKernel) {
  // Resolvent kernel (i/2k) e^{ik|x-y|} + c(k) e^{ik(|x| + |y|)}, c(k) = alpha/(2k(i alpha + 2k)).
  const Complex alpha(-1.0, 0.4);
  const auto spec = point_spec(alpha);
  const auto op = spec.op();
  const Complex z(0.5, 1.5);
  const Complex k = std::sqrt(z);
  const Complex c = alpha / (2.0 * k * (Complex(0.0, 1.0) * alpha + 2.0 * k));
  const Complex g2k = 2.0 * k / Complex(0.0, 1.0);
  const auto delta = ScaleVector::delta(0.0);
  const auto probes = line_probes();
  for (const auto& f : probes) {
    const auto& g = probes[1];
    const auto rf = resolvent_apply(op, z, f);
    const Complex expected = pairing(op, rf, g) + c * g2k * g2k * pairing(op, rf, delta) *
                                                      pairing(op, resolvent_apply(op, z, delta), g);
    EXPECT_LT(std::abs(form(spec, z, f, g) - expected), 1e-12);
  }
}

TEST(Adjoint, SwapsVectorsAndConjugates) {
  const auto spec = half_line_spec(Complex(1.0, 2.0));
  const auto adj = adjoint_spec(spec);
  EXPECT_EQ(*adj.alpha(), Complex(1.0, -2.0));
  const auto g = ScaleVector::power_law(-1.0);
  EXPECT_NEAR(std::abs(pairing(adj.op(), adj.omega1(), g, SpectralRational::resolvent(-1.0)) -
                       pairing(spec.op(), spec.omega2(), g, SpectralRational::resolvent(-1.0))),
              0.0, 1e-15);
  EXPECT_NEAR(std::abs(adj.tau() - std::conj(spec.tau())), 0.0, 1e-9);

  const auto sym = point_spec(-2.0);
  const auto sym_adj = adjoint_spec(sym);
  EXPECT_EQ(sym_adj.alpha(), sym.alpha());
  EXPECT_EQ(sym_adj.tau(), sym.tau());
}

TEST(Adjoint, DualityOfResolvents) {
  for (const auto& [spec, probes] :
       {std::pair{half_line_spec(Complex(1.0, 2.0)), half_line_probes()},
        std::pair{singular_spec(Complex(-0.5, 1.0), Complex(0.2, 0.0)), half_line_probes()},
        std::pair{point_spec(Complex(-1.0, 0.7)), line_probes()}}) {
    const auto adj = adjoint_spec(spec);
    const Complex z(-1.5, 0.8);
    for (const auto& f : probes)
      for (const auto& g : probes) {
        const Complex lhs = form(spec, z, f, g);
        const Complex rhs = pairing(spec.op(), f, krein_apply(adj, std::conj(z), g));
        EXPECT_LT(std::abs(lhs - rhs), 1e-8);
      }
  }
}

TEST(Scaling, ResolventInvariantUnderRescaledOmega) {
  const auto base = singular_spec(Complex(-0.5, 1.0), Complex(0.2, -0.1));
  const Complex z(-1.0, 0.5);
  const auto probes = half_line_probes();
  for (Complex a : {Complex(2.0, 0.0), Complex(-1.0, 0.0), Complex(1.0, 1.0)}) {
    const PerturbationSpec scaled(base.op(), base.omega1() * a, base.omega2(), *base.alpha() / std::conj(a),
                                  TauPolicy::fixed(std::conj(a) * base.tau()));
    for (const auto& f : probes)
      EXPECT_LT(std::abs(form(scaled, z, f, probes[1]) - form(base, z, f, probes[1])), 1e-8);
  }
}

TEST(KreinApply, TrivialKernel) {
  const auto spec = half_line_spec(Complex(2.0, 1.0));
  for (const auto& f : half_line_probes()) {
    const double out = norm(spec.op(), krein_apply(spec, Complex(-1.0, 0.0), f));
    EXPECT_GT(out, 1e-6 * norm(spec.op(), f));
  }
}

TEST(KreinData, TranslationConsistency) {
  const auto spec = singular_spec(1.0, 0.0);
  const Complex z(-1.0, 1.0), xi(-3.0, -0.5);
  const auto dz = krein_data(spec, z);
  const auto dxi = krein_data(spec, xi);
  const auto moved = resolvent_apply(spec.op(), z, dxi.n_z.filtered(SpectralRational::shift(xi)));
  const auto diff = moved - dz.n_z;
  EXPECT_LT(norm(spec.op(), diff), 1e-8);
}

TEST(PerturbationSpec, Validation) {
  EXPECT_THROW(half_line_spec(Complex(0.0, 0.0)), NumericalError);
  try {
    PerturbationSpec(OperatorModel::multiplication(2.0, 1.0), ScaleVector::power_law(3.0),
                     ScaleVector::power_law(-1.0), 1.0, TauPolicy::fixed(0.0));
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RegularityViolation);
  }
}
