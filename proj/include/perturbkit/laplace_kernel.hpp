#pragma once

#include <complex>
#include <vector>

#include "perturbkit/rational.hpp"

namespace perturbkit {

/// Pole of a partial-fraction expansion together with the coefficients of
/// 1/(l - pole)^j, j = 1..coefficients.size().
struct PartialFractionTerm {
  Complex pole;
  std::vector<Complex> coefficients;
};

/// Partial fractions of a proper rational function (degree < 0). Coincident
/// poles are grouped; the expansion is exact up to rounding.
std::vector<PartialFractionTerm> partial_fractions(const SpectralRational& r);

/// k = sqrt(-pole) with Re k >= 0; a boundary pole x +- i0 (x > 0) maps to
/// -+ i sqrt(x), the limit from the corresponding half plane.
Complex decay_rate(Complex pole);

/// Closed-form contraction of the free Laplacian kernel on R^dimension:
///
///   (2 pi)^-d  \int  W(|k|^2) e^{-i k.d} dk,
///
/// where `distance` is |d|. dimension 1 needs degree(W) <= -1; dimension 3
/// needs degree(W) <= -2, or -1 with distance > 0. Poles on the spectrum are
/// accepted only when `allow_boundary` is set (signed-zero boundary values).
///
/// Throws NonIntegrable or PoleOnSpectrum.
Complex kernel_contract(const SpectralRational& weight, double distance, int dimension,
                        bool allow_boundary = false);

}  // namespace perturbkit
