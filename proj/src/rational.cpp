#include "perturbkit/rational.hpp"

#include <algorithm>

namespace perturbkit {

SpectralRational SpectralRational::constant(Complex c) {
  SpectralRational r;
  r.scale_ = c;
  return r;
}

SpectralRational SpectralRational::resolvent(Complex z) {
  SpectralRational r;
  r.poles_.push_back(z);
  return r;
}

SpectralRational SpectralRational::shift(Complex z) {
  SpectralRational r;
  r.zeros_.push_back(z);
  return r;
}

SpectralRational SpectralRational::linear(Complex a, Complex b) {
  if (b == Complex(0.0, 0.0)) return constant(a);
  SpectralRational r;
  r.scale_ = b;
  r.zeros_.push_back(-a / b);
  return r;
}

Complex SpectralRational::operator()(Complex l) const {
  Complex value = scale_;
  for (const auto& z : zeros_) value *= (l - z);
  for (const auto& p : poles_) value /= (l - p);
  return value;
}

SpectralRational SpectralRational::operator*(const SpectralRational& other) const {
  SpectralRational r;
  r.scale_ = scale_ * other.scale_;
  if (r.scale_ == Complex(0.0, 0.0)) return r;

  std::vector<Complex> zeros = zeros_;
  zeros.insert(zeros.end(), other.zeros_.begin(), other.zeros_.end());
  std::vector<Complex> poles = poles_;
  poles.insert(poles.end(), other.poles_.begin(), other.poles_.end());

  for (auto z = zeros.begin(); z != zeros.end();) {
    auto p = std::find(poles.begin(), poles.end(), *z);
    if (p != poles.end()) {
      poles.erase(p);
      z = zeros.erase(z);
    } else {
      ++z;
    }
  }
  r.zeros_ = std::move(zeros);
  r.poles_ = std::move(poles);
  return r;
}

SpectralRational SpectralRational::operator*(Complex c) const {
  SpectralRational r = *this;
  r.scale_ *= c;
  if (r.scale_ == Complex(0.0, 0.0)) {
    r.zeros_.clear();
    r.poles_.clear();
  }
  return r;
}

SpectralRational SpectralRational::adjoint() const {
  SpectralRational r;
  r.scale_ = std::conj(scale_);
  for (const auto& z : zeros_) r.zeros_.push_back(std::conj(z));
  for (const auto& p : poles_) r.poles_.push_back(std::conj(p));
  return r;
}

}  // namespace perturbkit
