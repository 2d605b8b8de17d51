#include "perturbkit/errors.hpp"

namespace perturbkit {

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonIntegrable: return "NonIntegrable";
    case ErrorKind::PoleOnSpectrum: return "PoleOnSpectrum";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::UnrepresentableConvolution: return "UnrepresentableConvolution";
    case ErrorKind::UnsupportedBackend: return "UnsupportedBackend";
    case ErrorKind::Undecidable: return "Undecidable";
    case ErrorKind::PerturbedEigenvalue: return "PerturbedEigenvalue";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::RegionTouchesSpectrum: return "RegionTouchesSpectrum";
    case ErrorKind::RegularityViolation: return "RegularityViolation";
    case ErrorKind::EigenvectorOfA: return "EigenvectorOfA";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::WindowNotFound: return "WindowNotFound";
    case ErrorKind::ComplexTauUnsupported: return "ComplexTauUnsupported";
    case ErrorKind::OnSpectrumEdge: return "OnSpectrumEdge";
    case ErrorKind::DensityNondifferentiable: return "DensityNondifferentiable";
    case ErrorKind::ExtrapolationNotCauchy: return "ExtrapolationNotCauchy";
    case ErrorKind::SpectralSingularity: return "SpectralSingularity";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace perturbkit
