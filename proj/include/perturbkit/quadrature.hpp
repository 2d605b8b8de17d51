#pragma once

#include <complex>
#include <functional>
#include <span>

namespace perturbkit {

using Complex = std::complex<double>;

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;

  /// Throws InvalidArgument unless both tolerances are positive and at least
  /// one subdivision is allowed.
  void validate() const;
};

struct QuadratureResult {
  Complex value;
  double error = 0.0;
  int subdivisions = 0;
};

/// Globally adaptive Gauss-Kronrod (10/21) integration of a complex integrand
/// over the union of the segments [breaks[i], breaks[i+1]]. The last break may
/// be +infinity; that segment is mapped onto [0, 1) through x = a + t/(1 - t).
///
/// Stops when the summed error estimate is below max(abs_tol, rel_tol |I|) and
/// throws QuadratureFailure when max_subdivisions bisections did not get there.
QuadratureResult integrate(const std::function<Complex(double)>& f, std::span<const double> breaks,
                           const QuadratureConfig& config);

/// Convenience overload for a single interval [a, b], b possibly infinite.
QuadratureResult integrate(const std::function<Complex(double)>& f, double a, double b,
                           const QuadratureConfig& config);

}  // namespace perturbkit
