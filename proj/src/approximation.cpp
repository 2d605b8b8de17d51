#include "perturbkit/approximation.hpp"

#include <cmath>

#include "perturbkit/errors.hpp"

namespace perturbkit {

namespace {

SpectralRational tau_weight() {
  return SpectralRational::shift(0.0) * SpectralRational::resolvent(Complex(0.0, 1.0)) *
         SpectralRational::resolvent(Complex(0.0, -1.0));
}

PairingOptions tightened(const PairingOptions& base) {
  PairingOptions out = base;
  out.quadrature.abs_tol = std::min(base.quadrature.abs_tol, 1e-12);
  out.quadrature.rel_tol = std::min(base.quadrature.rel_tol, 1e-11);
  out.quadrature.max_subdivisions = std::max(base.quadrature.max_subdivisions, 4000);
  return out;
}

double real_part(Complex value, const char* what) {
  if (std::abs(value.imag()) > 1e-10 * (1.0 + std::abs(value)))
    throw NumericalError(ErrorKind::ComplexTauUnsupported, std::string(what) + " is not real");
  return value.real();
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void require_multiplication(const OperatorModel& op) {
  if (!op.is_multiplication())
    throw NumericalError(ErrorKind::UnsupportedBackend, "spectral windows need the multiplication backend");
}

}  // namespace

ScaleVector spectral_truncate(const OperatorModel& op, const ScaleVector& omega, SpectralWindow window) {
  require_multiplication(op);
  if (window.lower <= op.lower_bound() && !window.bounded()) return omega;
  return omega.windowed(window);
}

ApproxSequenceStep build_matching_step(const OperatorModel& op, const ScaleVector& omega1,
                                       const ScaleVector& omega2, Complex tau_value, double n,
                                       const WindowPolicy& policy, const PairingOptions& options) {
  require_multiplication(op);
  const double tau = real_part(tau_value, "tau");
  if (!(n > op.lower_bound()) || !std::isfinite(n))
    throw NumericalError(ErrorKind::InvalidArgument, "n must lie above the bottom of the spectrum");
  try {
    pairing(op, omega2, omega1, tau_weight(), options);
    throw NumericalError(ErrorKind::RegularityViolation,
                         "the tau pairing converges; matching a prescribed tau is not possible");
  } catch (const NumericalError& e) {
    if (e.kind() != ErrorKind::NonIntegrable) throw;
  }

  const PairingOptions tight = tightened(options);
  const auto w = tau_weight();
  ApproxSequenceStep step;
  step.n = n;
  const SpectralWindow head{0.0, n};
  const auto head1 = spectral_truncate(op, omega1, head);
  const auto head2 = spectral_truncate(op, omega2, head);
  step.a_n = real_part(pairing(op, head2, head1, w, tight), "a_n");

  const double target = std::abs(tau - step.a_n);
  double b = 0.0;
  double upper = n;
  bool found = false;
  for (int j = 1; j <= policy.max_doublings; ++j) {
    const double next = std::ldexp(n, j);
    const SpectralWindow slice{upper, next};
    b += real_part(pairing(op, omega2.windowed(slice), omega1.windowed(slice), w, tight), "b_n");
    upper = next;
    if (std::abs(b) > target) {
      found = true;
      break;
    }
  }
  if (!found) throw NumericalError(ErrorKind::WindowNotFound, "no window beyond n balances tau - a_n");

  step.window = {n, upper};
  step.b_n = b;
  step.eps1_n = std::sqrt(target / std::abs(b));
  step.eps2_n = sign(tau - step.a_n) * sign(b) * step.eps1_n;
  step.omega1_n = head1 + omega1.windowed(step.window, step.eps1_n);
  step.omega2_n = head2 + omega2.windowed(step.window, step.eps2_n);
  step.realized = real_part(pairing(op, step.omega2_n, step.omega1_n, w, tight), "realized pairing");
  return step;
}

PerturbationSpec step_spec(const PerturbationSpec& limit, const ApproxSequenceStep& step) {
  return PerturbationSpec(limit.op(), step.omega1_n, step.omega2_n, limit.alpha(), TauPolicy::automatic(),
                          limit.options());
}

std::vector<ScaleVector> default_probes(const OperatorModel& op) {
  const double bottom = op.lower_bound();
  std::vector<ScaleVector> probes;
  for (double q : {0.0, -0.5, -1.0, -1.5, -2.0})
    for (double width : {10.0, 1000.0}) probes.push_back(ScaleVector::power_law(q).windowed({bottom, bottom + width}));
  return probes;
}

GapReport resolvent_gap(const PerturbationSpec& spec_n, const PerturbationSpec& spec_limit, Complex z,
                        const std::vector<ScaleVector>& probes) {
  const auto& op = spec_limit.op();
  const auto& options = spec_limit.options();
  GapReport report;
  report.omega1_error = norm(op, resolvent_apply(op, z, spec_n.omega1() - spec_limit.omega1()), options);
  report.omega2_error = norm(op, resolvent_apply(op, z, spec_n.omega2() - spec_limit.omega2()), options);

  const auto b_n = b_of_z(spec_n, z);
  const auto b = b_of_z(spec_limit, z);
  if (b_n.infinite || b.infinite)
    throw NumericalError(ErrorKind::PerturbedEigenvalue, "z is an eigenvalue of one of the operators");
  report.pairing_gap = std::abs(krein_denominator(spec_n, z) - krein_denominator(spec_limit, z));

  // (R~_n - R~) f = b_n (f, n_n) m_n - b (f, n) m; R_z f cancels exactly.
  const auto n_n = resolvent_apply(op, std::conj(z), spec_n.omega1());
  const auto n_lim = resolvent_apply(op, std::conj(z), spec_limit.omega1());
  const auto m_n = resolvent_apply(op, z, spec_n.omega2());
  const auto m_lim = resolvent_apply(op, z, spec_limit.omega2());
  for (const auto& f : probes) {
    const double nf = norm(op, f, options);
    if (!(nf > 0.0)) continue;
    const Complex c_n = b_n.value * pairing(op, f, n_n, {}, options);
    const Complex c = b.value * pairing(op, f, n_lim, {}, options);
    const double diff = norm(op, m_n * c_n - m_lim * c, options);
    report.gap = std::max(report.gap, diff / nf);
  }
  return report;
}

}  // namespace perturbkit
