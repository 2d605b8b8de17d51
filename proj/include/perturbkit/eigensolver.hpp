#pragma once

#include <vector>

#include "perturbkit/krein.hpp"

namespace perturbkit {

struct EigenPair {
  Complex lambda;
  ScaleVector phi;  // eigenvector of the perturbed operator, ||phi|| = 1
  ScaleVector psi;  // eigenvector of its adjoint at conj(lambda), ||psi|| = 1
  /// (A - lambda)^-1 omega2 = phi_scale * phi.
  Complex phi_scale{1.0, 0.0};
  double residual = 0.0;
  /// Found on the continuous spectrum through boundary values.
  bool embedded = false;
};

/// Closed rectangle [re_min, re_max] x [im_min, im_max]; a real interval when
/// im_min == im_max == 0.
struct SearchRegion {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  static SearchRegion interval(double a, double b) { return {a, b, 0.0, 0.0}; }
  bool is_real() const { return im_min == 0.0 && im_max == 0.0; }
  bool contains(Complex z, double slack = 0.0) const;
};

struct EigenSearchOptions {
  int max_iterations = 200;
  double step_tol = 1e-12;
  double condition_tol = 1e-9;
  /// Samples along a real interval, and per side of the automatic seed grid.
  int real_samples = 64;
  int seed_grid = 5;
  /// Allow real intervals inside the continuous spectrum: roots of
  /// alpha^-1 + tau + F(lambda +- i0) via Plemelj boundary values.
  bool embedded = false;
};

/// alpha^-1 + tau + F(lambda); zero exactly on the new point spectrum.
/// The Zero marker has no new eigenvalues and returns +inf.
Complex eigen_condition(const PerturbationSpec& spec, Complex lambda);

/// Eigenvalues of the perturbed operator inside `region`, sorted by real then
/// imaginary part. Real intervals whose condition is real-valued are scanned
/// and bracketed; everything else runs a damped secant from `seeds` (or an
/// automatic grid when none are given).
///
/// Throws RegionTouchesSpectrum, or NoConvergence when user seeds all fail.
std::vector<EigenPair> find_eigenvalues(const PerturbationSpec& spec, const SearchRegion& region,
                                        const std::vector<Complex>& seeds = {},
                                        const EigenSearchOptions& options = {});

/// Eigenvector pair at a known root.
EigenPair make_eigen_pair(const PerturbationSpec& spec, Complex lambda, double residual, bool embedded = false);

/// max over z of |(lambda - z) b_z (phi, n_conj(z)) - 1| plus the norm of
/// phi - (A - z)(A - lambda)^-1 m_z (phi unnormalised). Empty test_points
/// picks three points off the spectrum.
double verify_eigen(const PerturbationSpec& spec, const EigenPair& pair, std::vector<Complex> test_points = {});

/// Smallest relative L2 distance between a and a phase rotation of b.
double eigenvector_deviation(const OperatorModel& op, const ScaleVector& a, const ScaleVector& b);

struct InverseProblem {
  PerturbationSpec spec;
  Complex lambda;
  ScaleVector phi;
  ScaleVector psi;
};

/// Perturbation with prescribed eigenvalue lambda and eigenvectors phi (of the
/// operator) and psi (of its adjoint): omega1 = (A - conj lambda) psi,
/// omega2 = (A - lambda) phi, alpha^-1 = -tau - F(lambda).
///
/// phi, psi in H+1 (both) gives an Auto tau; otherwise `tau` is used as an
/// Explicit value. Throws RegularityViolation when phi or psi is outside H or
/// both lie in H+2, EigenvectorOfA when an omega vanishes, and
/// DegenerateDenominator when alpha^-1 would be zero.
InverseProblem inverse_problem(const OperatorModel& op, Complex lambda, const ScaleVector& phi,
                               const ScaleVector& psi, Complex tau = 0.0, const PairingOptions& options = {});

/// KreinData built from the eigen data alone: m_z = (A - lambda)(A - z)^-1 phi,
/// n_z = (A - conj lambda)(A - z)^-1 psi, b_z^-1 = (lambda - z)(phi, n_conj(z)).
KreinData inverse_krein_data(const InverseProblem& problem, Complex z);

struct DualPair {
  Complex mu;
  Complex lambda;
  ScaleVector phi_lambda, phi_mu, psi_lambda, psi_mu;
  Complex alpha;
  ScaleVector omega1, omega2;
  PerturbationSpec spec;
  double condition_mu = 0.0;      // |eigen_condition(spec, mu)|
  double condition_lambda = 0.0;  // |eigen_condition(spec, lambda)|
  double pairing_residual = 0.0;  // |(lambda - mu)(R_mu phi, psi) - (phi, psi)|
};

/// Dual pair (mu, lambda) from one eigenvector pair:
/// lambda = mu + (phi, psi)/((A - mu)^-1 phi, psi), then the inverse problem at
/// lambda. Throws DegenerateDenominator when the pairing quotient is undefined.
DualPair dual_pair(const OperatorModel& op, Complex mu, const ScaleVector& phi_lambda,
                   const ScaleVector& psi_lambda, const PairingOptions& options = {});

}  // namespace perturbkit
