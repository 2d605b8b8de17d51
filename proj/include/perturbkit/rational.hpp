#pragma once

#include <complex>
#include <vector>

namespace perturbkit {

using Complex = std::complex<double>;

/// Rational function of the spectral variable in factored form,
///
///   r(l) = scale * prod(l - zeros[i]) / prod(l - poles[j]).
///
/// Used both as the weight of a pairing and as a functional-calculus filter
/// r(A) carried by a vector term. Products cancel coincident zero/pole pairs
/// exactly, which is what keeps (A - l)(A - l)^{-1} from ever producing a pole
/// on the spectrum.
///
/// A pole whose imaginary part is a signed zero denotes a boundary value:
/// (x, +0.0) means x + i0 and (x, -0.0) means x - i0.
class SpectralRational {
 public:
  SpectralRational() = default;  // the constant 1

  static SpectralRational constant(Complex c);
  /// 1 / (l - z)
  static SpectralRational resolvent(Complex z);
  /// l - z
  static SpectralRational shift(Complex z);
  /// a + b l
  static SpectralRational linear(Complex a, Complex b);

  Complex operator()(Complex l) const;
  Complex operator()(double l) const { return (*this)(Complex(l, 0.0)); }

  SpectralRational operator*(const SpectralRational& other) const;
  SpectralRational operator*(Complex c) const;

  /// r*(l) = conj(r(conj l)); the filter of the adjoint operator r(A)*.
  SpectralRational adjoint() const;

  Complex scale() const { return scale_; }
  const std::vector<Complex>& zeros() const { return zeros_; }
  const std::vector<Complex>& poles() const { return poles_; }

  /// Growth order at infinity: #zeros - #poles.
  int degree() const { return static_cast<int>(zeros_.size()) - static_cast<int>(poles_.size()); }
  bool is_zero() const { return scale_ == Complex(0.0, 0.0); }
  bool is_identity() const { return zeros_.empty() && poles_.empty() && scale_ == Complex(1.0, 0.0); }

  bool operator==(const SpectralRational& other) const = default;

 private:
  Complex scale_{1.0, 0.0};
  std::vector<Complex> zeros_;
  std::vector<Complex> poles_;
};

}  // namespace perturbkit
