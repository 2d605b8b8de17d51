#pragma once

#include <vector>

#include "perturbkit/krein.hpp"

namespace perturbkit {

/// Candidate matching windows are [n, n 2^j], j = 1..max_doublings; the first
/// with |b_n| > |tau - a_n| is taken.
struct WindowPolicy {
  int max_doublings = 80;
};

struct ApproxSequenceStep {
  double n = 0.0;
  ScaleVector omega1_n;
  ScaleVector omega2_n;
  double a_n = 0.0;
  double b_n = 0.0;
  double eps1_n = 0.0;
  double eps2_n = 0.0;
  SpectralWindow window;  // [c_n, d_n]
  double realized = 0.0;  // <omega2_n, A(A^2+1)^-1 omega1_n>, recomputed
};

/// E_window omega (multiplication backend only). A window covering the whole
/// spectrum returns omega unchanged. Throws UnsupportedBackend otherwise.
ScaleVector spectral_truncate(const OperatorModel& op, const ScaleVector& omega, SpectralWindow window);

/// omega_i,n = E_[0,n] omega_i + eps_i,n E_[c_n,d_n] omega_i with the window
/// beyond n, so that the truncated and window parts do not interact and
/// <omega2_n, A(A^2+1)^-1 omega1_n> = a_n + eps1 eps2 b_n = tau.
///
/// Throws ComplexTauUnsupported, RegularityViolation (the tau pairing of the
/// pair converges, nothing to match) or WindowNotFound.
ApproxSequenceStep build_matching_step(const OperatorModel& op, const ScaleVector& omega1,
                                       const ScaleVector& omega2, Complex tau, double n,
                                       const WindowPolicy& policy = {}, const PairingOptions& options = {});

/// Perturbation with the step's vectors, the same alpha and an Auto tau.
PerturbationSpec step_spec(const PerturbationSpec& limit, const ApproxSequenceStep& step);

struct GapReport {
  double gap = 0.0;           // max_f ||(R~_n,z - R~_z) f|| / ||f||
  double omega1_error = 0.0;  // ||(A - z)^-1 (omega1_n - omega1)||
  double omega2_error = 0.0;  // ||(A - z)^-1 (omega2_n - omega2)||
  double pairing_gap = 0.0;   // |b_n,z^-1 - b_z^-1|
};

/// Ten windowed power-law probes on the low part of the spectrum.
std::vector<ScaleVector> default_probes(const OperatorModel& op);

/// Resolvent distance of two perturbations on a probe set. Throws
/// PerturbedEigenvalue when z is an eigenvalue of either operator.
GapReport resolvent_gap(const PerturbationSpec& spec_n, const PerturbationSpec& spec_limit, Complex z,
                        const std::vector<ScaleVector>& probes);

}  // namespace perturbkit
