#pragma once

#include <complex>
#include <string>

namespace perturbkit {

using Complex = std::complex<double>;

enum class Backend { Multiplication, LaplaceLine, LaplaceSpace3D };

std::string backend_name(Backend backend);

/// The unperturbed positive selfadjoint operator A in a computable form.
///
/// Multiplication: A f(x) = x^p f(x) on L2([a, inf), dx) with a >= 0 and p > 0,
/// so spectrum(A) = [a^p, inf).
/// LaplaceLine / LaplaceSpace3D: A = -Laplacian on R^1 / R^3, spectrum [0, inf),
/// handled through closed-form resolvent kernels.
class OperatorModel {
 public:
  static OperatorModel multiplication(double power, double domain_start);
  static OperatorModel laplace_line();
  static OperatorModel laplace_space3d();

  Backend backend() const { return backend_; }
  bool is_multiplication() const { return backend_ == Backend::Multiplication; }
  double power() const { return power_; }
  double domain_start() const { return domain_start_; }

  /// The constant c with A >= c, i.e. the bottom of the spectrum.
  double lower_bound() const;

  double symbol(double x) const;
  double symbol_derivative(double x) const;
  /// Point x of the domain with symbol(x) = l; l must not be below lower_bound().
  double preimage(double l) const;

  /// True when z lies on [lower_bound, inf); a signed-zero imaginary part
  /// (a boundary value l +- i0) counts as on the spectrum.
  bool in_spectrum(Complex z) const;

  /// Spectral-axis exponents used by the regularity rules: the symbol grows
  /// like t^symbol_power along the integration variable t and the measure is
  /// t^measure_power dt.
  double symbol_power() const;
  double measure_power() const;

  std::string describe() const;

 private:
  Backend backend_ = Backend::Multiplication;
  double power_ = 1.0;
  double domain_start_ = 0.0;
};

}  // namespace perturbkit
