#include "perturbkit/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "perturbkit/errors.hpp"
#include "perturbkit/laplace_kernel.hpp"

namespace perturbkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCancel = 1e-12;

// Leading behaviour c * x^exponent of a primitive as x -> inf;
// exponent = -inf for primitives that vanish or decay exponentially.
struct Tail {
  double exponent = -kInf;
  Complex lead{0.0, 0.0};
};

Tail primitive_tail(const Primitive& base) {
  if (const auto* p = std::get_if<PowerLaw>(&base)) return {p->exponent, {1.0, 0.0}};
  if (const auto* t = std::get_if<Tabulated>(&base)) {
    if (!t->extrapolate_tail) return {};
    const double slope = t->tail_slope();
    if (!std::isfinite(slope)) return {};
    return {slope, t->values.back() / std::pow(t->grid.back(), slope)};
  }
  return {};
}

Complex evaluate_primitive(const Primitive& base, double x) {
  if (const auto* p = std::get_if<PowerLaw>(&base)) return std::pow(x + p->shift, p->exponent);
  if (const auto* e = std::get_if<ExpAbs>(&base)) return std::exp(-e->rate * std::abs(x - e->center));
  if (const auto* t = std::get_if<Tabulated>(&base)) return (*t)(x);
  throw NumericalError(ErrorKind::InvalidArgument, "delta vectors cannot be evaluated pointwise");
}

void check_multiplication_primitive(const OperatorModel& op, const Primitive& base) {
  if (std::holds_alternative<Delta>(base))
    throw NumericalError(ErrorKind::InvalidArgument,
                         "Delta is only admitted under the Laplace backends");
  if (const auto* p = std::get_if<PowerLaw>(&base); p && op.domain_start() + p->shift < 0.0)
    throw NumericalError(ErrorKind::InvalidArgument,
                         "power law (x + s)^q with a + s < 0 is singular inside the domain");
}

void check_laplace_primitive(const OperatorModel& op, const VectorTerm& term) {
  if (term.window)
    throw NumericalError(ErrorKind::UnsupportedBackend,
                         "spectral windows are not available under the Laplace backends");
  const bool ok = std::holds_alternative<Delta>(term.base) ||
                  (op.backend() == Backend::LaplaceLine && std::holds_alternative<ExpAbs>(term.base));
  if (!ok)
    throw NumericalError(ErrorKind::UnrepresentableConvolution,
                         "backend " + backend_name(op.backend()) + " cannot resolve this primitive");
}

// Spectral-axis range [lower, upper] covered by a term.
SpectralWindow term_range(const OperatorModel& op, const VectorTerm& t) {
  SpectralWindow all{op.lower_bound(), kInf};
  if (!t.window) return all;
  return t.window->intersect(all).value_or(SpectralWindow{0.0, 0.0});
}

struct PairTerm {
  Complex coefficient;
  SpectralRational weight;
  const Primitive* f;
  const Primitive* g;
  double x_lower;
  double x_upper;
};

bool same_exponent(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)); }

Complex pairing_multiplication(const OperatorModel& op, const ScaleVector& f, const ScaleVector& g,
                               const SpectralRational& weight, const PairingOptions& options) {
  const double p = op.power();
  const double a = op.domain_start();
  std::vector<PairTerm> pairs;
  std::vector<std::pair<double, Complex>> tails;  // unbounded pairs: exponent, lead
  double total_lead = 0.0;

  for (const auto& tf : f.terms()) {
    check_multiplication_primitive(op, tf.base);
    for (const auto& tg : g.terms()) {
      check_multiplication_primitive(op, tg.base);
      const auto range = term_range(op, tf).intersect(term_range(op, tg));
      if (!range) continue;
      SpectralRational w = weight * tf.filter * tg.filter.adjoint();
      if (w.is_zero()) continue;
      const Complex coefficient = tf.coefficient * std::conj(tg.coefficient);

      for (const auto& pole : w.poles())
        if (pole.imag() == 0.0 && pole.real() >= range->lower && pole.real() <= range->upper)
          throw NumericalError(ErrorKind::PoleOnSpectrum, "pairing weight has a pole on the spectrum");

      if (!range->bounded()) {
        const Tail t1 = primitive_tail(tf.base);
        const Tail t2 = primitive_tail(tg.base);
        const double e = t1.exponent + t2.exponent + p * w.degree();
        if (e > -kInf) {
          const Complex lead = coefficient * w.scale() * t1.lead * std::conj(t2.lead);
          tails.emplace_back(e, lead);
          total_lead += std::abs(lead);
        }
      }

      if (range->lower <= op.lower_bound()) {
        double local = 0.0;
        for (const Primitive* base : {&tf.base, &tg.base})
          if (const auto* pw = std::get_if<PowerLaw>(base); pw && a + pw->shift == 0.0)
            local += pw->exponent;
        if (local <= -1.0)
          throw NumericalError(ErrorKind::NonIntegrable,
                               "integrand is not integrable at the bottom of the domain");
      }

      const double x_upper = range->bounded() ? op.preimage(range->upper) : kInf;
      pairs.push_back({coefficient, std::move(w), &tf.base, &tg.base, op.preimage(range->lower), x_upper});
    }
  }
  if (pairs.empty()) return {0.0, 0.0};

  // Leading surviving tail decides integrability; fully cancelled groups are
  // left to the quadrature.
  std::sort(tails.begin(), tails.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t i = 0; i < tails.size();) {
    std::size_t j = i;
    Complex sum(0.0, 0.0);
    while (j < tails.size() && same_exponent(tails[j].first, tails[i].first)) sum += tails[j++].second;
    if (std::abs(sum) > kCancel * total_lead) {
      if (tails[i].first >= -1.0)
        throw NumericalError(ErrorKind::NonIntegrable,
                             "integrand decays like x^" + std::to_string(tails[i].first));
      break;
    }
    i = j;
  }

  std::vector<double> breaks{a};
  bool unbounded = false;
  for (const auto& pr : pairs) {
    breaks.push_back(pr.x_lower);
    if (std::isfinite(pr.x_upper)) breaks.push_back(pr.x_upper);
    else unbounded = true;
    for (const Primitive* base : {pr.f, pr.g})
      if (const auto* t = std::get_if<Tabulated>(base); t && t->grid.size() <= 512)
        breaks.insert(breaks.end(), t->grid.begin(), t->grid.end());
    // Poles close to the spectrum make the integrand sharply peaked.
    for (const auto& pole : pr.weight.poles()) {
      const double re = pole.real();
      const double im = std::abs(pole.imag());
      if (re <= op.lower_bound() || im > 0.25 * (re - op.lower_bound())) continue;
      breaks.push_back(op.preimage(re));
      for (double k : {1.0, 8.0, 64.0}) {
        if (re - k * im > op.lower_bound()) breaks.push_back(op.preimage(re - k * im));
        breaks.push_back(op.preimage(re + k * im));
      }
    }
  }
  std::erase_if(breaks, [a](double x) { return !(x >= a) || !std::isfinite(x); });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  if (unbounded) breaks.push_back(kInf);
  if (breaks.size() < 2) return {0.0, 0.0};

  auto integrand = [&](double x) {
    Complex sum(0.0, 0.0);
    const double m = op.symbol(x);
    for (const auto& pr : pairs) {
      if (x < pr.x_lower || x > pr.x_upper) continue;
      sum += pr.coefficient * pr.weight(m) * evaluate_primitive(*pr.f, x) *
             std::conj(evaluate_primitive(*pr.g, x));
    }
    return sum;
  };
  return integrate(integrand, breaks, options.quadrature).value;
}

SpectralRational fourier_factor(const Primitive& base) {
  if (const auto* e = std::get_if<ExpAbs>(&base))
    return SpectralRational::constant(2.0 * e->rate) * SpectralRational::resolvent(-e->rate * e->rate);
  return {};
}

std::array<double, 3> position(const Primitive& base) {
  if (const auto* e = std::get_if<ExpAbs>(&base)) return {e->center, 0.0, 0.0};
  return std::get<Delta>(base).point;
}

double distance(const OperatorModel& op, const Primitive& f, const Primitive& g) {
  const auto x = position(f);
  const auto y = position(g);
  if (op.backend() == Backend::LaplaceLine) return std::abs(x[0] - y[0]);
  return std::hypot(x[0] - y[0], x[1] - y[1], x[2] - y[2]);
}

Complex pairing_laplace(const OperatorModel& op, const ScaleVector& f, const ScaleVector& g,
                        const SpectralRational& weight, const PairingOptions& options) {
  const int dimension = op.backend() == Backend::LaplaceLine ? 1 : 3;
  Complex total(0.0, 0.0);
  for (const auto& tf : f.terms()) {
    check_laplace_primitive(op, tf);
    for (const auto& tg : g.terms()) {
      check_laplace_primitive(op, tg);
      const SpectralRational w = weight * tf.filter * tg.filter.adjoint() * fourier_factor(tf.base) *
                                 fourier_factor(tg.base);
      total += tf.coefficient * std::conj(tg.coefficient) *
               kernel_contract(w, distance(op, tf.base, tg.base), dimension, options.boundary_values);
    }
  }
  return total;
}

}  // namespace

Complex pairing(const OperatorModel& op, const ScaleVector& f, const ScaleVector& g,
                const SpectralRational& weight, const PairingOptions& options) {
  options.quadrature.validate();
  if (weight.is_zero() || f.is_zero() || g.is_zero()) return {0.0, 0.0};
  if (op.is_multiplication()) return pairing_multiplication(op, f, g, weight, options);
  return pairing_laplace(op, f, g, weight, options);
}

Complex evaluate(const OperatorModel& op, const ScaleVector& v, double x) {
  if (!op.is_multiplication())
    throw NumericalError(ErrorKind::UnsupportedBackend, "pointwise values need the multiplication backend");
  const double m = op.symbol(x);
  Complex sum(0.0, 0.0);
  for (const auto& t : v.terms()) {
    check_multiplication_primitive(op, t.base);
    if (t.window && (m < t.window->lower || m > t.window->upper)) continue;
    sum += t.coefficient * t.filter(m) * evaluate_primitive(t.base, x);
  }
  return sum;
}

ScaleVector resolvent_apply(const OperatorModel& op, Complex z, const ScaleVector& v) {
  for (const auto& t : v.terms()) {
    if (op.is_multiplication()) {
      if (std::holds_alternative<Delta>(t.base))
        throw NumericalError(ErrorKind::UnrepresentableConvolution,
                             "multiplication backend cannot resolve a delta");
      const auto range = term_range(op, t);
      if (z.imag() == 0.0 && z.real() >= range.lower && z.real() <= range.upper)
        throw NumericalError(ErrorKind::PoleOnSpectrum, "resolvent point lies on the spectrum");
    } else {
      check_laplace_primitive(op, t);
    }
  }
  if (!op.is_multiplication() && op.in_spectrum(z))
    throw NumericalError(ErrorKind::PoleOnSpectrum, "resolvent point lies on the spectrum");
  return v.filtered(SpectralRational::resolvent(z));
}

ScaleVector eta(const OperatorModel& op, const ScaleVector& omega) {
  return resolvent_apply(op, {0.0, 0.0}, omega);
}

namespace {

// Tail exponent per term along the integration variable, grouped by
// (exponent, position) so that exactly cancelling leads are recognised.
struct TailGroup {
  double exponent;
  std::array<double, 3> where;
  Complex lead;
  double magnitude;
};

void add_tail(std::vector<TailGroup>& groups, double e, std::array<double, 3> where, Complex lead) {
  for (auto& g : groups)
    if (same_exponent(g.exponent, e) && g.where == where) {
      g.lead += lead;
      g.magnitude += std::abs(lead);
      return;
    }
  groups.push_back({e, where, lead, std::abs(lead)});
}

}  // namespace

Regularity classify_regularity(const OperatorModel& op, const ScaleVector& v) {
  if (v.is_zero()) return Regularity::PlusTwo;
  const double p = op.symbol_power();
  const double beta = op.measure_power();
  std::vector<TailGroup> groups;
  bool tabulated_tail = false;
  double local = kInf;

  for (const auto& t : v.terms()) {
    const Complex c = t.coefficient * t.filter.scale();
    if (op.is_multiplication()) {
      check_multiplication_primitive(op, t.base);
      if (const auto* pw = std::get_if<PowerLaw>(&t.base); pw && op.domain_start() + pw->shift == 0.0) {
        double order = pw->exponent;
        if (op.domain_start() == 0.0) {
          for (const auto& z : t.filter.zeros())
            if (z == Complex(0.0, 0.0)) order += p;
          for (const auto& q : t.filter.poles())
            if (q == Complex(0.0, 0.0)) order -= p;
        }
        local = std::min(local, order);
      }
      if (t.window && t.window->bounded()) continue;
      const Tail tail = primitive_tail(t.base);
      if (tail.exponent == -kInf) continue;
      tabulated_tail = tabulated_tail || std::holds_alternative<Tabulated>(t.base);
      add_tail(groups, tail.exponent + p * t.filter.degree(), {}, c * tail.lead);
    } else {
      check_laplace_primitive(op, t);
      double e = 2.0 * t.filter.degree();
      Complex lead = c;
      if (const auto* ex = std::get_if<ExpAbs>(&t.base)) {
        e -= 2.0;
        lead *= 2.0 * ex->rate;
      }
      add_tail(groups, e, position(t.base), lead);
    }
  }

  if (2.0 * local <= -1.0) return Regularity::Outside;

  double leading = -kInf;
  for (const auto& g : groups) {
    if (std::abs(g.lead) <= kCancel * g.magnitude)
      throw NumericalError(ErrorKind::Undecidable, "leading tails cancel; class cannot be read off");
    leading = std::max(leading, g.exponent);
  }
  if (leading == -kInf) return Regularity::PlusTwo;

  for (int s = 2; s >= -2; --s) {
    const double margin = -1.0 - (p * s + 2.0 * leading + beta);
    if (tabulated_tail && std::abs(margin) < 1e-3)
      throw NumericalError(ErrorKind::Undecidable, "tabulated tail sits on a class boundary");
    if (margin > 0.0) return regularity_from_index(s);
  }
  return Regularity::Outside;
}

double scale_norm(const OperatorModel& op, const ScaleVector& v, int k, const PairingOptions& options) {
  if (k < -2 || k > 2) throw NumericalError(ErrorKind::InvalidArgument, "scale index must be in [-2, 2]");
  SpectralRational weight;
  for (int i = 0; i < std::abs(k); ++i)
    weight = weight * (k > 0 ? SpectralRational::shift(-1.0) : SpectralRational::resolvent(-1.0));
  return std::sqrt(std::max(pairing(op, v, v, weight, options).real(), 0.0));
}

double norm(const OperatorModel& op, const ScaleVector& v, const PairingOptions& options) {
  return scale_norm(op, v, 0, options);
}

}  // namespace perturbkit
