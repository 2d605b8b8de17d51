#pragma once

#include <vector>

#include "perturbkit/krein.hpp"

namespace perturbkit {

/// Plemelj: principal value plus +-i pi times the spectral density
/// (multiplication backend) or the exact l +- i0 kernel limit (Laplace
/// backends). EtaExtrapolation: Richardson extrapolation of F(l +- i eta).
enum class BoundaryMethod { Plemelj, EtaExtrapolation };

std::string boundary_method_name(BoundaryMethod method);

struct BoundaryValue {
  double lambda = 0.0;
  Complex F_plus;
  Complex F_minus;
  BoundaryMethod method = BoundaryMethod::Plemelj;
  std::vector<double> eta_ladder;  // empty for Plemelj
};

struct BoundaryOptions {
  double eta_start = 1e-2;
  int eta_levels = 4;
  /// Largest allowed gap between the last two Richardson estimates.
  double cauchy_tol = 1e-6;
};

/// F(lambda +- i0) at a point of the absolutely continuous spectrum.
///
/// Throws OnSpectrumEdge at or below the bottom of the spectrum and
/// ExtrapolationNotCauchy when the Richardson estimates do not settle.
/// A Plemelj request at a density kink (window edge, tabulated vector) falls
/// back to extrapolation.
BoundaryValue boundary_value(const PerturbationSpec& spec, double lambda,
                             BoundaryMethod method = BoundaryMethod::Plemelj,
                             const BoundaryOptions& options = {});

struct ScatteringSample {
  double lambda = 0.0;
  Complex S{1.0, 0.0};
  Complex amplitude_plus;   // 1 + tau + alpha F(lambda + i0)
  Complex amplitude_minus;  // 1 + tau + alpha F(lambda - i0)
  bool singular = false;    // spectral singularity: amplitude_plus vanishes
};

/// S(lambda) = (1 + tau + alpha F(lambda - i0)) / (1 + tau + alpha F(lambda + i0)).
/// A vanishing denominator is reported through `singular` with S = inf.
ScatteringSample smatrix(const PerturbationSpec& spec, double lambda,
                         BoundaryMethod method = BoundaryMethod::Plemelj, const BoundaryOptions& options = {});

/// smatrix from precomputed boundary values.
ScatteringSample smatrix(const PerturbationSpec& spec, const BoundaryValue& bv);

}  // namespace perturbkit
