#pragma once

#include <optional>

#include "perturbkit/spectral_core.hpp"

namespace perturbkit {

/// How the renormalised pairing <omega2, A(A^2+1)^-1 omega1> is obtained.
struct TauPolicy {
  enum class Kind { Auto, Explicit };
  Kind kind = Kind::Auto;
  Complex value{0.0, 0.0};

  static TauPolicy automatic() { return {}; }
  static TauPolicy fixed(Complex tau) { return {Kind::Explicit, tau}; }
};

/// The data (A, omega1, omega2, alpha, tau) of A + alpha <., omega1> omega2.
///
/// alpha == std::nullopt is the Zero marker: the perturbation is switched off
/// and every resolvent equals R_z. An Auto tau is evaluated once, here; a
/// divergent pairing surfaces as NonIntegrable and needs an Explicit tau.
class PerturbationSpec {
 public:
  PerturbationSpec(OperatorModel op, ScaleVector omega1, ScaleVector omega2, std::optional<Complex> alpha,
                   TauPolicy tau = TauPolicy::automatic(), PairingOptions options = {});

  const OperatorModel& op() const { return op_; }
  const ScaleVector& omega1() const { return omega1_; }
  const ScaleVector& omega2() const { return omega2_; }
  const std::optional<Complex>& alpha() const { return alpha_; }
  bool alpha_is_zero() const { return !alpha_.has_value(); }
  /// 1/alpha; zero for the Zero marker.
  Complex alpha_inverse() const;
  const TauPolicy& tau_policy() const { return tau_policy_; }
  Complex tau() const { return tau_; }
  const PairingOptions& options() const { return options_; }

 private:
  OperatorModel op_;
  ScaleVector omega1_;
  ScaleVector omega2_;
  std::optional<Complex> alpha_;
  TauPolicy tau_policy_;
  Complex tau_{0.0, 0.0};
  PairingOptions options_;
};

/// b_z, or Infinity at eigenvalues of the perturbed operator.
struct KreinCoefficient {
  Complex value{0.0, 0.0};
  bool infinite = false;
};

struct KreinData {
  Complex z;
  ScaleVector n_z;  // R_z omega1
  ScaleVector m_z;  // R_z omega2
  KreinCoefficient b_z;
  Complex F_value;
};

/// <omega2, A(A^2+1)^-1 omega1>. Throws NonIntegrable when it diverges.
Complex tau_auto(const OperatorModel& op, const ScaleVector& omega1, const ScaleVector& omega2,
                 const PairingOptions& options = {});
Complex tau_auto(const PerturbationSpec& spec);

/// (1 + z l) / ((l - z)(l^2 + 1)), the weight of the regularised pairing.
SpectralRational regularized_weight(Complex z);

/// F(z) = <(A - z)^-1 omega2, (1 + conj(z) A)(A^2 + 1)^-1 omega1>.
Complex regularized_F(const PerturbationSpec& spec, Complex z);

/// alpha^-1 + tau + F(z); vanishes exactly on the new point spectrum.
Complex krein_denominator(const PerturbationSpec& spec, Complex z);

/// b_z = -1/(alpha^-1 + tau + F(z)); zero for the Zero marker.
KreinCoefficient b_of_z(const PerturbationSpec& spec, Complex z);

KreinData krein_data(const PerturbationSpec& spec, Complex z);

/// R~_z f = R_z f + b_z (f, n_conj(z)) m_z. Throws PerturbedEigenvalue when
/// b_z is infinite.
ScaleVector krein_apply(const PerturbationSpec& spec, Complex z, const ScaleVector& f);

/// |b_z^-1 - b_xi^-1 - (xi - z)(m_xi, n_conj(z))|.
double cocycle_residual(const PerturbationSpec& spec, Complex z, Complex xi);

/// (omega1, omega2, alpha, tau) -> (omega2, omega1, conj alpha, conj tau).
PerturbationSpec adjoint_spec(const PerturbationSpec& spec);

/// KreinData at z = 0. Throws PerturbedEigenvalue when 0 is an eigenvalue of
/// the perturbed operator.
KreinData inverse_at_zero(const PerturbationSpec& spec);

}  // namespace perturbkit
