#include "perturbkit/krein.hpp"

#include <cmath>

#include "perturbkit/errors.hpp"

namespace perturbkit {

namespace {

SpectralRational tau_weight() {
  return SpectralRational::shift(0.0) * SpectralRational::resolvent(Complex(0.0, 1.0)) *
         SpectralRational::resolvent(Complex(0.0, -1.0));
}

void require_scale_member(const OperatorModel& op, const ScaleVector& omega, const char* name) {
  if (classify_regularity(op, omega) == Regularity::Outside)
    throw NumericalError(ErrorKind::RegularityViolation, std::string(name) + " is not in H-2");
}

}  // namespace

PerturbationSpec::PerturbationSpec(OperatorModel op, ScaleVector omega1, ScaleVector omega2,
                                   std::optional<Complex> alpha, TauPolicy tau, PairingOptions options)
    : op_(std::move(op)),
      omega1_(std::move(omega1)),
      omega2_(std::move(omega2)),
      alpha_(alpha),
      tau_policy_(tau),
      options_(options) {
  options_.quadrature.validate();
  if (alpha_ && (*alpha_ == Complex(0.0, 0.0) || !std::isfinite(std::abs(*alpha_))))
    throw NumericalError(ErrorKind::InvalidArgument, "alpha must be finite and nonzero; use the Zero marker");
  require_scale_member(op_, omega1_, "omega1");
  require_scale_member(op_, omega2_, "omega2");
  if (tau_policy_.kind == TauPolicy::Kind::Explicit) tau_ = tau_policy_.value;
  else if (alpha_) tau_ = tau_auto(op_, omega1_, omega2_, options_);
}

Complex PerturbationSpec::alpha_inverse() const {
  return alpha_ ? 1.0 / *alpha_ : Complex(0.0, 0.0);
}

Complex tau_auto(const OperatorModel& op, const ScaleVector& omega1, const ScaleVector& omega2,
                 const PairingOptions& options) {
  return pairing(op, omega2, omega1, tau_weight(), options);
}

Complex tau_auto(const PerturbationSpec& spec) {
  if (spec.tau_policy().kind == TauPolicy::Kind::Auto && !spec.alpha_is_zero()) return spec.tau();
  return tau_auto(spec.op(), spec.omega1(), spec.omega2(), spec.options());
}

SpectralRational regularized_weight(Complex z) {
  return SpectralRational::linear(1.0, z) * SpectralRational::resolvent(z) *
         SpectralRational::resolvent(Complex(0.0, 1.0)) * SpectralRational::resolvent(Complex(0.0, -1.0));
}

Complex regularized_F(const PerturbationSpec& spec, Complex z) {
  return pairing(spec.op(), spec.omega2(), spec.omega1(), regularized_weight(z), spec.options());
}

Complex krein_denominator(const PerturbationSpec& spec, Complex z) {
  return spec.alpha_inverse() + spec.tau() + regularized_F(spec, z);
}

KreinCoefficient b_of_z(const PerturbationSpec& spec, Complex z) {
  if (spec.alpha_is_zero()) {
    if (spec.op().in_spectrum(z))
      throw NumericalError(ErrorKind::PoleOnSpectrum, "resolvent point lies on the spectrum");
    return {};
  }
  const Complex F = regularized_F(spec, z);
  const Complex den = spec.alpha_inverse() + spec.tau() + F;
  const auto& q = spec.options().quadrature;
  const double scale = std::abs(spec.alpha_inverse()) + std::abs(spec.tau()) + std::abs(F);
  if (std::abs(den) <= 10.0 * std::max(q.abs_tol, q.rel_tol * scale)) return {{0.0, 0.0}, true};
  return {-1.0 / den, false};
}

KreinData krein_data(const PerturbationSpec& spec, Complex z) {
  KreinData d;
  d.z = z;
  d.n_z = resolvent_apply(spec.op(), z, spec.omega1());
  d.m_z = resolvent_apply(spec.op(), z, spec.omega2());
  d.F_value = regularized_F(spec, z);
  d.b_z = b_of_z(spec, z);
  return d;
}

ScaleVector krein_apply(const PerturbationSpec& spec, Complex z, const ScaleVector& f) {
  const auto& op = spec.op();
  ScaleVector out = resolvent_apply(op, z, f);
  if (spec.alpha_is_zero()) return out;
  const auto b = b_of_z(spec, z);
  if (b.infinite)
    throw NumericalError(ErrorKind::PerturbedEigenvalue, "z is an eigenvalue of the perturbed operator");
  const auto n_conj = resolvent_apply(op, std::conj(z), spec.omega1());
  const Complex coupling = b.value * pairing(op, f, n_conj, {}, spec.options());
  return out + resolvent_apply(op, z, spec.omega2()) * coupling;
}

double cocycle_residual(const PerturbationSpec& spec, Complex z, Complex xi) {
  // alpha^-1 and tau cancel in b_z^-1 - b_xi^-1 = F(xi) - F(z).
  if (z == xi) return 0.0;
  const auto& op = spec.op();
  const Complex lhs = regularized_F(spec, xi) - regularized_F(spec, z);
  const auto m_xi = resolvent_apply(op, xi, spec.omega2());
  const auto n_conj = resolvent_apply(op, std::conj(z), spec.omega1());
  return std::abs(lhs - (xi - z) * pairing(op, m_xi, n_conj, {}, spec.options()));
}

PerturbationSpec adjoint_spec(const PerturbationSpec& spec) {
  std::optional<Complex> alpha;
  if (spec.alpha()) alpha = std::conj(*spec.alpha());
  TauPolicy tau = spec.tau_policy();
  tau.value = std::conj(tau.value);
  return PerturbationSpec(spec.op(), spec.omega2(), spec.omega1(), alpha, tau, spec.options());
}

KreinData inverse_at_zero(const PerturbationSpec& spec) {
  KreinData d = krein_data(spec, {0.0, 0.0});
  if (d.b_z.infinite)
    throw NumericalError(ErrorKind::PerturbedEigenvalue, "0 is an eigenvalue of the perturbed operator");
  return d;
}

}  // namespace perturbkit
