#pragma once

#include "perturbkit/operator_model.hpp"
#include "perturbkit/quadrature.hpp"
#include "perturbkit/rational.hpp"
#include "perturbkit/scale_vector.hpp"

namespace perturbkit {

struct PairingOptions {
  QuadratureConfig quadrature;
  /// Accept weight poles with a signed-zero imaginary part on the spectrum as
  /// boundary values l +- i0. Only the Laplace kernel backends honour it.
  bool boundary_values = false;
};

/// <weight(A) f, g>, linear in f and conjugate-linear in g.
///
/// Multiplication backend: \int weight(m(x)) f(x) conj(g(x)) dx by adaptive
/// quadrature. Laplace backends: closed-form kernel contraction.
///
/// Throws NonIntegrable, PoleOnSpectrum, QuadratureFailure,
/// UnrepresentableConvolution or UnsupportedBackend.
Complex pairing(const OperatorModel& op, const ScaleVector& f, const ScaleVector& g,
                const SpectralRational& weight = {}, const PairingOptions& options = {});

/// Pointwise value v(x) on the multiplication backend (filters evaluated at
/// m(x), windows as indicators). Throws UnsupportedBackend on Laplace models.
Complex evaluate(const OperatorModel& op, const ScaleVector& v, double x);

/// (A - z)^-1 v. Throws PoleOnSpectrum for z on the spectrum and
/// UnrepresentableConvolution for vectors the backend cannot resolve.
ScaleVector resolvent_apply(const OperatorModel& op, Complex z, const ScaleVector& v);

/// Finest class k in {+2, ..., -2} with finite k-norm, by exponent arithmetic.
/// Throws Undecidable when leading tails cancel or a tabulated tail sits on a
/// class boundary.
Regularity classify_regularity(const OperatorModel& op, const ScaleVector& v);

/// A^-1 omega. Throws PoleOnSpectrum when 0 is in the spectrum.
ScaleVector eta(const OperatorModel& op, const ScaleVector& omega);

/// ||v||_k = <(A + 1)^k v, v>^{1/2} for k in {-2, ..., 2}.
double scale_norm(const OperatorModel& op, const ScaleVector& v, int k,
                  const PairingOptions& options = {});

/// Plain L2 norm, scale_norm(op, v, 0).
double norm(const OperatorModel& op, const ScaleVector& v, const PairingOptions& options = {});

}  // namespace perturbkit
