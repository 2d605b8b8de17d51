#include "perturbkit/laplace_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "perturbkit/errors.hpp"

namespace perturbkit {

namespace {

using Series = std::vector<Complex>;

Series multiply(const Series& a, const Series& b, std::size_t order) {
  Series out(order, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.size() && i < order; ++i)
    for (std::size_t j = 0; j < b.size() && i + j < order; ++j) out[i + j] += a[i] * b[j];
  return out;
}

// sum_n a_n k^n * exp(-k s): the family closed under d/dpole, since
// d/dpole = -(1/(2k)) d/dk when pole = -k^2.
struct ExpLaurent {
  std::map<int, Complex> coeff;
  double s = 0.0;

  ExpLaurent pole_derivative() const {
    ExpLaurent out;
    out.s = s;
    for (const auto& [n, a] : coeff) {
      if (n != 0) out.coeff[n - 2] += -0.5 * static_cast<double>(n) * a;
      if (s != 0.0) out.coeff[n - 1] += 0.5 * s * a;
    }
    return out;
  }

  Complex operator()(Complex k) const {
    Complex sum(0.0, 0.0);
    for (const auto& [n, a] : coeff) sum += a * std::pow(k, n);
    return sum * std::exp(-k * s);
  }
};

// Poles closer than this (relative) are summed as one cluster by a contour
// integral; their separate partial-fraction coefficients cancel badly.
constexpr double kClusterTol = 1e-4;
constexpr int kContourNodes = 128;

struct Cluster {
  Complex center;
  double radius;   // contour radius
  std::vector<Complex> members;
};

double distance_to_cut(Complex z) {
  if (z.real() >= 0.0) return std::abs(z.imag());
  return std::abs(z);
}

std::vector<Cluster> contour_clusters(const std::vector<Complex>& poles) {
  std::vector<Complex> distinct;
  for (const auto& p : poles)
    if (std::find(distinct.begin(), distinct.end(), p) == distinct.end()) distinct.push_back(p);
  const std::size_t n = distinct.size();
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double tol = kClusterTol * (1.0 + std::abs(distinct[i]));
        if (std::abs(distinct[i] - distinct[j]) < tol && label[i] != label[j]) {
          const auto keep = std::min(label[i], label[j]);
          label[i] = label[j] = keep;
          changed = true;
        }
      }
  }
  std::vector<Cluster> out;
  for (std::size_t l = 0; l < n; ++l) {
    Cluster c;
    for (std::size_t i = 0; i < n; ++i)
      if (label[i] == l) c.members.push_back(distinct[i]);
    if (c.members.size() < 2) continue;
    Complex sum(0.0, 0.0);
    for (const auto& m : c.members) sum += m;
    c.center = sum / static_cast<double>(c.members.size());
    double spread = 0.0;
    for (const auto& m : c.members) spread = std::max(spread, std::abs(m - c.center));
    double room = distance_to_cut(c.center);
    for (const auto& q : distinct)
      if (std::find(c.members.begin(), c.members.end(), q) == c.members.end())
        room = std::min(room, std::abs(q - c.center));
    c.radius = 0.5 * room;
    // Too crowded for a well-conditioned contour: keep plain partial fractions.
    if (!(c.radius > 8.0 * spread)) continue;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<PartialFractionTerm> partial_fractions(const SpectralRational& r) {
  if (r.degree() >= 0)
    throw NumericalError(ErrorKind::NonIntegrable, "partial fractions need a proper rational function");
  std::vector<PartialFractionTerm> out;
  std::vector<std::pair<Complex, int>> groups;
  for (const auto& p : r.poles()) {
    bool found = false;
    for (auto& g : groups)
      if (g.first == p) {
        ++g.second;
        found = true;
        break;
      }
    if (!found) groups.emplace_back(p, 1);
  }

  for (const auto& [p, m] : groups) {
    const auto order = static_cast<std::size_t>(m);
    // Taylor series in u = l - p of (l - p)^m r(l).
    Series h{r.scale()};
    for (const auto& z : r.zeros()) h = multiply(h, Series{p - z, 1.0}, order);
    for (const auto& [q, mq] : groups) {
      if (q == p) continue;
      const Complex gap = p - q;
      Series inv(order);
      Complex term = 1.0 / gap;
      for (std::size_t n = 0; n < order; ++n) {
        inv[n] = term;
        term *= -1.0 / gap;
      }
      for (int k = 0; k < mq; ++k) h = multiply(h, inv, order);
    }
    h.resize(order, Complex(0.0, 0.0));
    PartialFractionTerm term;
    term.pole = p;
    term.coefficients.resize(order);
    for (std::size_t l = 0; l < order; ++l) term.coefficients[order - 1 - l] = h[l];
    out.push_back(std::move(term));
  }
  return out;
}

Complex decay_rate(Complex pole) {
  if (pole.imag() == 0.0 && pole.real() > 0.0) {
    const double root = std::sqrt(pole.real());
    return std::signbit(pole.imag()) ? Complex(0.0, root) : Complex(0.0, -root);
  }
  Complex k = std::sqrt(-pole);
  if (k.real() < 0.0) k = -k;
  return k;
}

Complex kernel_contract(const SpectralRational& weight, double distance, int dimension,
                        bool allow_boundary) {
  if (weight.is_zero()) return {0.0, 0.0};
  if (dimension != 1 && dimension != 3)
    throw NumericalError(ErrorKind::InvalidArgument, "kernel contraction supports dimensions 1 and 3");
  distance = std::abs(distance);
  const int deg = weight.degree();
  const bool ok = dimension == 1 ? deg <= -1 : (deg <= -2 || (deg == -1 && distance > 0.0));
  if (!ok)
    throw NumericalError(ErrorKind::NonIntegrable,
                         "kernel contraction diverges for a weight of degree " + std::to_string(deg));

  for (const auto& p : weight.poles()) {
    if (p.imag() != 0.0 || p.real() < 0.0) continue;
    if (p.real() == 0.0 || !allow_boundary)
      throw NumericalError(ErrorKind::PoleOnSpectrum, "weight has a pole on [0, inf)");
  }

  ExpLaurent base;
  constexpr double pi = std::numbers::pi;
  if (dimension == 1) {
    base.s = distance;
    base.coeff[-1] = 0.5;
  } else if (distance > 0.0) {
    base.s = distance;
    base.coeff[0] = 1.0 / (4.0 * pi * distance);
  } else {
    // Regular part of exp(-k r)/(4 pi r) at r = 0; the 1/r parts cancel
    // because the residues of a weight with degree <= -2 sum to zero.
    base.s = 0.0;
    base.coeff[1] = -1.0 / (4.0 * pi);
  }

  Complex total(0.0, 0.0);
  // The contraction is the residue sum of weight(p) * J_1(p); clusters of
  // nearly equal poles are integrated around a circle instead.
  const auto clusters = contour_clusters(weight.poles());
  auto clustered = [&](Complex p) {
    for (const auto& c : clusters)
      if (std::find(c.members.begin(), c.members.end(), p) != c.members.end()) return true;
    return false;
  };
  for (const auto& c : clusters) {
    Complex sum(0.0, 0.0);
    for (int i = 0; i < kContourNodes; ++i) {
      const Complex offset = std::polar(c.radius, 2.0 * pi * (i + 0.5) / kContourNodes);
      const Complex zeta = c.center + offset;
      sum += weight(zeta) * base(decay_rate(zeta)) * offset;
    }
    total += sum / static_cast<double>(kContourNodes);
  }
  for (const auto& term : partial_fractions(weight)) {
    if (clustered(term.pole)) continue;
    const Complex k = decay_rate(term.pole);
    ExpLaurent j = base;
    double factorial = 1.0;
    for (std::size_t order = 0; order < term.coefficients.size(); ++order) {
      if (order > 0) {
        j = j.pole_derivative();
        factorial *= static_cast<double>(order);
      }
      total += term.coefficients[order] * j(k) / factorial;
    }
  }
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag()))
    throw NumericalError(ErrorKind::PoleOnSpectrum, "kernel contraction is singular");
  return total;
}

}  // namespace perturbkit
