#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace perturbkit {

enum class ErrorKind {
  NonIntegrable,
  PoleOnSpectrum,
  QuadratureFailure,
  UnrepresentableConvolution,
  UnsupportedBackend,
  Undecidable,
  PerturbedEigenvalue,
  NoConvergence,
  RegionTouchesSpectrum,
  RegularityViolation,
  EigenvectorOfA,
  DegenerateDenominator,
  WindowNotFound,
  ComplexTauUnsupported,
  OnSpectrumEdge,
  DensityNondifferentiable,
  ExtrapolationNotCauchy,
  SpectralSingularity,
  InvalidArgument,
};

std::string_view error_name(ErrorKind kind);

/// Numerical failure raised by any module. `kind()` names the failure the way
/// the reports and the CLI print it.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace perturbkit
