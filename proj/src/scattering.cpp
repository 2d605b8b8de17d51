#include "perturbkit/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "perturbkit/errors.hpp"

namespace perturbkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PairingOptions tightened(const PairingOptions& base) {
  PairingOptions out = base;
  out.quadrature.abs_tol = std::min(base.quadrature.abs_tol, 1e-12);
  out.quadrature.rel_tol = std::min(base.quadrature.rel_tol, 1e-11);
  out.quadrature.max_subdivisions = std::max(base.quadrature.max_subdivisions, 4000);
  return out;
}

// Spectral points where the pairing density has a kink or jump.
std::vector<double> density_edges(const PerturbationSpec& spec) {
  std::vector<double> edges;
  for (const auto* v : {&spec.omega1(), &spec.omega2()})
    for (const auto& t : v->terms()) {
      if (std::holds_alternative<Tabulated>(t.base))
        throw NumericalError(ErrorKind::DensityNondifferentiable, "tabulated vectors have kinked densities");
      if (t.window) {
        edges.push_back(t.window->lower);
        if (t.window->bounded()) edges.push_back(t.window->upper);
      }
    }
  return edges;
}

BoundaryValue plemelj_multiplication(const PerturbationSpec& spec, double lambda) {
  const auto& op = spec.op();
  const double bottom = op.lower_bound();
  double delta = 0.5 * (lambda - bottom);
  for (double e : density_edges(spec)) {
    const double gap = std::abs(e - lambda);
    if (gap <= 1e-9 * (1.0 + lambda))
      throw NumericalError(ErrorKind::DensityNondifferentiable, "lambda sits on a spectral window edge");
    delta = std::min(delta, 0.5 * gap);
  }

  const auto& q = spec.options().quadrature;
  auto g = [&](double x) {
    const double m = op.symbol(x);
    return evaluate(op, spec.omega2(), x) * std::conj(evaluate(op, spec.omega1(), x)) / (m * m + 1.0);
  };
  auto density = [&](double mu) {
    const double x = op.preimage(mu);
    return g(x) / op.symbol_derivative(x);
  };

  const SpectralRational damping =
      SpectralRational::resolvent(Complex(0.0, 1.0)) * SpectralRational::resolvent(Complex(0.0, -1.0));
  const Complex c0 = pairing(op, spec.omega2(), spec.omega1(), damping, spec.options());

  const double x_left = op.preimage(lambda - delta);
  const double x_right = op.preimage(lambda + delta);
  std::vector<double> left{op.domain_start()}, right{x_right};
  for (double e : density_edges(spec)) {
    if (e <= bottom) continue;
    const double x = op.preimage(e);
    if (x < x_left) left.push_back(x);
    else if (x > x_right) right.push_back(x);
  }
  left.push_back(x_left);
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  left.erase(std::unique(left.begin(), left.end()), left.end());
  right.erase(std::unique(right.begin(), right.end()), right.end());
  right.push_back(kInf);

  auto outer_integrand = [&](double x) { return g(x) / (op.symbol(x) - lambda); };
  Complex pv = integrate(outer_integrand, left, q).value + integrate(outer_integrand, right, q).value;
  // Symmetric subtraction removes the 1/(mu - lambda) singularity.
  pv += integrate([&](double t) { return (density(lambda + t) - density(lambda - t)) / t; }, 0.0, delta, q).value;

  const Complex jump = Complex(0.0, std::numbers::pi) * density(lambda);
  const double w = 1.0 + lambda * lambda;
  BoundaryValue bv;
  bv.lambda = lambda;
  bv.method = BoundaryMethod::Plemelj;
  bv.F_plus = lambda * c0 + w * (pv + jump);
  bv.F_minus = lambda * c0 + w * (pv - jump);
  return bv;
}

BoundaryValue plemelj_laplace(const PerturbationSpec& spec, double lambda) {
  PairingOptions options = spec.options();
  options.boundary_values = true;
  BoundaryValue bv;
  bv.lambda = lambda;
  bv.method = BoundaryMethod::Plemelj;
  bv.F_plus = pairing(spec.op(), spec.omega2(), spec.omega1(), regularized_weight(Complex(lambda, 0.0)), options);
  bv.F_minus = pairing(spec.op(), spec.omega2(), spec.omega1(), regularized_weight(Complex(lambda, -0.0)), options);
  return bv;
}

Complex richardson(const std::vector<Complex>& samples, double cauchy_tol) {
  // Samples at eta, eta/2, eta/4, ...; the error expands in integer powers of eta.
  std::vector<std::vector<Complex>> table(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    table[i].push_back(samples[i]);
    for (std::size_t j = 1; j <= i; ++j) {
      const double factor = std::ldexp(1.0, static_cast<int>(j)) - 1.0;
      table[i].push_back(table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / factor);
    }
  }
  const std::size_t n = samples.size();
  const Complex best = table[n - 1][n - 1];
  if (n >= 2 && std::abs(best - table[n - 2][n - 2]) > cauchy_tol * (1.0 + std::abs(best)))
    throw NumericalError(ErrorKind::ExtrapolationNotCauchy,
                         "Richardson estimates differ by " + std::to_string(std::abs(best - table[n - 2][n - 2])));
  return best;
}

BoundaryValue eta_extrapolation(const PerturbationSpec& spec, double lambda, const BoundaryOptions& options) {
  if (!(options.eta_start > 0.0) || options.eta_levels < 2)
    throw NumericalError(ErrorKind::InvalidArgument, "eta ladder needs a positive start and >= 2 levels");
  const PairingOptions tight = tightened(spec.options());
  BoundaryValue bv;
  bv.lambda = lambda;
  bv.method = BoundaryMethod::EtaExtrapolation;
  std::vector<Complex> plus, minus;
  for (int i = 0; i < options.eta_levels; ++i) {
    const double eta = std::ldexp(options.eta_start, -i);
    bv.eta_ladder.push_back(eta);
    plus.push_back(pairing(spec.op(), spec.omega2(), spec.omega1(), regularized_weight({lambda, eta}), tight));
    minus.push_back(pairing(spec.op(), spec.omega2(), spec.omega1(), regularized_weight({lambda, -eta}), tight));
  }
  bv.F_plus = richardson(plus, options.cauchy_tol);
  bv.F_minus = richardson(minus, options.cauchy_tol);
  return bv;
}

}  // namespace

std::string boundary_method_name(BoundaryMethod method) {
  return method == BoundaryMethod::Plemelj ? "plemelj" : "eta_extrapolation";
}

BoundaryValue boundary_value(const PerturbationSpec& spec, double lambda, BoundaryMethod method,
                             const BoundaryOptions& options) {
  if (!std::isfinite(lambda) || lambda <= spec.op().lower_bound())
    throw NumericalError(ErrorKind::OnSpectrumEdge, "lambda must lie inside the continuous spectrum");
  if (method == BoundaryMethod::Plemelj) {
    if (!spec.op().is_multiplication()) return plemelj_laplace(spec, lambda);
    try {
      return plemelj_multiplication(spec, lambda);
    } catch (const NumericalError& e) {
      if (e.kind() != ErrorKind::DensityNondifferentiable) throw;
    }
  }
  return eta_extrapolation(spec, lambda, options);
}

ScatteringSample smatrix(const PerturbationSpec& spec, const BoundaryValue& bv) {
  ScatteringSample s;
  s.lambda = bv.lambda;
  const Complex alpha = spec.alpha().value_or(Complex(0.0, 0.0));
  s.amplitude_plus = 1.0 + spec.tau() + alpha * bv.F_plus;
  s.amplitude_minus = 1.0 + spec.tau() + alpha * bv.F_minus;
  const double scale = 1.0 + std::abs(spec.tau()) + std::abs(alpha * bv.F_plus);
  if (std::abs(s.amplitude_plus) <= 1e-12 * scale) {
    s.singular = true;
    s.S = Complex(kInf, 0.0);
    return s;
  }
  s.S = s.amplitude_minus / s.amplitude_plus;
  return s;
}

ScatteringSample smatrix(const PerturbationSpec& spec, double lambda, BoundaryMethod method,
                         const BoundaryOptions& options) {
  if (spec.alpha_is_zero()) {
    if (!std::isfinite(lambda) || lambda <= spec.op().lower_bound())
      throw NumericalError(ErrorKind::OnSpectrumEdge, "lambda must lie inside the continuous spectrum");
    ScatteringSample s;
    s.lambda = lambda;
    s.amplitude_plus = s.amplitude_minus = 1.0 + spec.tau();
    return s;
  }
  return smatrix(spec, boundary_value(spec, lambda, method, options));
}

}  // namespace perturbkit
