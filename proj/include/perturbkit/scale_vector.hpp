#pragma once

#include <array>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "perturbkit/rational.hpp"

namespace perturbkit {

/// x -> (x + shift)^exponent on the operator domain (multiplication backend).
struct PowerLaw {
  double exponent = 0.0;
  double shift = 0.0;
};

/// x -> exp(-rate |x - center|) (Laplace line backend).
struct ExpAbs {
  double rate = 1.0;
  double center = 0.0;
};

/// Point evaluation at `point`; the line backend only reads point[0].
struct Delta {
  std::array<double, 3> point{0.0, 0.0, 0.0};
};

/// Piecewise linear samples on an ascending grid, zero left of the grid.
/// Right of the grid the vector is zero, or, with extrapolate_tail, continued
/// as a power law fitted to the last two samples.
struct Tabulated {
  std::vector<double> grid;
  std::vector<Complex> values;
  bool extrapolate_tail = false;

  Complex operator()(double x) const;
  /// log-log slope of |values| over the last two samples.
  double tail_slope() const;
};

using Primitive = std::variant<PowerLaw, ExpAbs, Delta, Tabulated>;

/// Spectral window [lower, upper] on the spectral axis; upper may be +inf.
struct SpectralWindow {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  bool empty() const { return !(upper > lower); }
  bool bounded() const { return upper < std::numeric_limits<double>::infinity(); }
  std::optional<SpectralWindow> intersect(const SpectralWindow& other) const;
  bool operator==(const SpectralWindow&) const = default;
};

/// One term coefficient * filter(A) * E_window * base.
struct VectorTerm {
  Complex coefficient{1.0, 0.0};
  SpectralRational filter;
  std::optional<SpectralWindow> window;
  Primitive base;
};

/// Regularity class on the A-scale: the finest k in {+2, +1, 0, -1, -2} with
/// finite k-norm.
enum class Regularity { PlusTwo, PlusOne, Zero, MinusOne, MinusTwo, Outside };

std::string regularity_name(Regularity r);
/// Scale index of a class (PlusTwo -> 2, ..., MinusTwo -> -2, Outside -> -3).
int regularity_index(Regularity r);
Regularity regularity_from_index(int k);

/// A vector of the A-scale: a finite sum of catalog primitives, each passed
/// through a rational filter of A and optionally a spectral window.
///
/// Vectors are immutable values; every operation returns a new vector.
class ScaleVector {
 public:
  ScaleVector() = default;  // the zero vector
  explicit ScaleVector(std::vector<VectorTerm> terms);

  static ScaleVector power_law(double exponent, double shift = 0.0);
  static ScaleVector exp_abs(double rate, double center);
  static ScaleVector delta(double point);
  static ScaleVector delta(std::array<double, 3> point);
  static ScaleVector tabulated(std::vector<double> grid, std::vector<Complex> values,
                               bool extrapolate_tail = false);

  const std::vector<VectorTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// filter(A) applied to every term.
  ScaleVector filtered(const SpectralRational& filter) const;
  /// scale * E_window applied to every term.
  ScaleVector windowed(SpectralWindow window, Complex scale = Complex(1.0, 0.0)) const;

  ScaleVector operator+(const ScaleVector& other) const;
  ScaleVector operator-(const ScaleVector& other) const;
  ScaleVector operator*(Complex c) const;
  friend ScaleVector operator*(Complex c, const ScaleVector& v) { return v * c; }

  bool has_delta() const;
  std::string describe() const;

 private:
  std::vector<VectorTerm> terms_;
};

}  // namespace perturbkit
