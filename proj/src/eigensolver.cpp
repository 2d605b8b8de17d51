#include "perturbkit/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "perturbkit/errors.hpp"
#include "perturbkit/scattering.hpp"

namespace perturbkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_root(Complex a, Complex b) { return std::abs(a - b) <= 1e-7 * (1.0 + std::abs(a)); }

void add_root(std::vector<EigenPair>& roots, EigenPair pair) {
  for (const auto& r : roots)
    if (same_root(r.lambda, pair.lambda)) return;
  roots.push_back(std::move(pair));
}

// Real filter zero shared by every term of v within tol of x, if any.
std::optional<Complex> common_zero(const ScaleVector& v, double x, bool conjugate) {
  std::optional<Complex> found;
  for (const auto& t : v.terms()) {
    std::optional<Complex> hit;
    for (const auto& z : t.filter.zeros()) {
      const Complex zz = conjugate ? std::conj(z) : z;
      if (std::abs(zz.imag()) <= 1e-12 && std::abs(zz.real() - x) <= 1e-7 * (1.0 + std::abs(x))) hit = zz;
    }
    if (!hit || (found && *found != *hit)) return std::nullopt;
    found = hit;
  }
  return found;
}

template <class F>
double bracket_root(F&& f, double a, double b, double fa, double fb) {
  std::uintmax_t max_iter = 200;
  auto tol = [](double lo, double hi) { return std::abs(hi - lo) <= 1e-14 * (1.0 + std::abs(lo)); };
  const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, max_iter);
  return 0.5 * (lo + hi);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return xs;
}

struct SecantResult {
  Complex root;
  double residual;
  bool converged;
};

SecantResult damped_secant(const PerturbationSpec& spec, Complex seed, const EigenSearchOptions& options) {
  auto condition = [&](Complex z) -> std::optional<Complex> {
    try {
      return eigen_condition(spec, z);
    } catch (const NumericalError& e) {
      if (e.kind() == ErrorKind::PoleOnSpectrum || e.kind() == ErrorKind::QuadratureFailure) return std::nullopt;
      throw;
    }
  };
  Complex x0 = seed;
  Complex x1 = seed + Complex(1.0, 1.0) * (1e-3 * (1.0 + std::abs(seed)));
  auto c0 = condition(x0);
  auto c1 = condition(x1);
  if (!c0 || !c1) return {seed, kInf, false};
  for (int it = 0; it < options.max_iterations; ++it) {
    if (*c1 == *c0) break;
    Complex step = -*c1 * (x1 - x0) / (*c1 - *c0);
    Complex x2 = x1 + step;
    auto c2 = condition(x2);
    for (int k = 0; k < 30 && (!c2 || std::abs(*c2) > std::abs(*c1)); ++k) {
      step *= 0.5;
      x2 = x1 + step;
      c2 = condition(x2);
    }
    if (!c2) break;
    x0 = x1;
    c0 = c1;
    x1 = x2;
    c1 = c2;
    if (std::abs(step) < options.step_tol * (1.0 + std::abs(x1)))
      return {x1, std::abs(*c1), std::abs(*c1) < options.condition_tol};
  }
  return {x1, std::abs(*c1), false};
}

std::vector<Complex> automatic_seeds(const SearchRegion& region, int n) {
  std::vector<Complex> seeds;
  const auto re = n > 1 ? linspace(region.re_min, region.re_max, n) : std::vector<double>{region.re_min};
  std::vector<double> im{0.0};
  if (!region.is_real() && n > 1) im = linspace(region.im_min, region.im_max, n);
  for (double x : re)
    for (double y : im) seeds.emplace_back(x, y);
  return seeds;
}

void real_search(const PerturbationSpec& spec, const SearchRegion& region, const EigenSearchOptions& options,
                 std::vector<EigenPair>& roots, bool& real_valued) {
  const auto xs = linspace(region.re_min, region.re_max, std::max(options.real_samples, 2));
  std::vector<Complex> cs;
  real_valued = true;
  for (double x : xs) {
    cs.push_back(eigen_condition(spec, x));
    if (std::abs(cs.back().imag()) > 1e-10 * (1.0 + std::abs(cs.back()))) real_valued = false;
  }
  if (!real_valued) return;
  auto f = [&](double x) { return eigen_condition(spec, x).real(); };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double root = kInf;
    if (cs[i].real() == 0.0) root = xs[i];
    else if (i + 1 < xs.size() && cs[i].real() * cs[i + 1].real() < 0.0)
      root = bracket_root(f, xs[i], xs[i + 1], cs[i].real(), cs[i + 1].real());
    if (!std::isfinite(root)) continue;
    const double residual = std::abs(eigen_condition(spec, root));
    if (residual < options.condition_tol) add_root(roots, make_eigen_pair(spec, root, residual));
  }
}

void embedded_search(const PerturbationSpec& spec, const SearchRegion& region, const EigenSearchOptions& options,
                     std::vector<EigenPair>& roots) {
  const Complex base = spec.alpha_inverse() + spec.tau();
  auto mean_condition = [&](double x) {
    const auto bv = boundary_value(spec, x, BoundaryMethod::Plemelj);
    return base + 0.5 * (bv.F_plus + bv.F_minus);
  };
  const auto xs = linspace(region.re_min, region.re_max, std::max(options.real_samples, 2));
  std::vector<double> hs;
  for (double x : xs) hs.push_back(mean_condition(x).real());
  auto f = [&](double x) { return mean_condition(x).real(); };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double root = kInf;
    if (hs[i] == 0.0) root = xs[i];
    else if (i + 1 < xs.size() && hs[i] * hs[i + 1] < 0.0) root = bracket_root(f, xs[i], xs[i + 1], hs[i], hs[i + 1]);
    if (!std::isfinite(root)) continue;
    const auto bv = boundary_value(spec, root, BoundaryMethod::Plemelj);
    const double residual = std::max(std::abs(base + bv.F_plus), std::abs(base + bv.F_minus));
    if (residual >= options.condition_tol) continue;
    // An eigenvector in H exists only when omega2 carries the factor (A - root).
    if (!common_zero(spec.omega2(), root, false) || !common_zero(spec.omega1(), root, true)) continue;
    add_root(roots, make_eigen_pair(spec, root, residual, true));
  }
}

}  // namespace

bool SearchRegion::contains(Complex z, double slack) const {
  return z.real() >= re_min - slack && z.real() <= re_max + slack && z.imag() >= im_min - slack &&
         z.imag() <= im_max + slack;
}

Complex eigen_condition(const PerturbationSpec& spec, Complex lambda) {
  if (spec.alpha_is_zero()) return {kInf, 0.0};
  return krein_denominator(spec, lambda);
}

EigenPair make_eigen_pair(const PerturbationSpec& spec, Complex lambda, double residual, bool embedded) {
  const auto& op = spec.op();
  EigenPair pair;
  pair.lambda = lambda;
  pair.residual = residual;
  pair.embedded = embedded;
  ScaleVector phi, psi;
  if (embedded) {
    const auto z2 = common_zero(spec.omega2(), lambda.real(), false);
    const auto z1 = common_zero(spec.omega1(), lambda.real(), true);
    if (!z2 || !z1)
      throw NumericalError(ErrorKind::NoConvergence, "embedded root carries no eigenvector in H");
    phi = spec.omega2().filtered(SpectralRational::resolvent(*z2));
    psi = spec.omega1().filtered(SpectralRational::resolvent(std::conj(*z1)));
  } else {
    phi = resolvent_apply(op, lambda, spec.omega2());
    psi = resolvent_apply(op, std::conj(lambda), spec.omega1());
  }
  const double nphi = norm(op, phi, spec.options());
  const double npsi = norm(op, psi, spec.options());
  if (!(nphi > 0.0) || !(npsi > 0.0))
    throw NumericalError(ErrorKind::NoConvergence, "eigenvector has zero norm");
  pair.phi = phi * Complex(1.0 / nphi, 0.0);
  pair.phi_scale = nphi;
  pair.psi = psi * Complex(1.0 / npsi, 0.0);
  const Complex p = pairing(op, pair.phi, pair.psi, {}, spec.options());
  if (std::abs(p) > 0.0) pair.psi = pair.psi * (p / std::abs(p));
  return pair;
}

std::vector<EigenPair> find_eigenvalues(const PerturbationSpec& spec, const SearchRegion& region,
                                        const std::vector<Complex>& seeds, const EigenSearchOptions& options) {
  if (!(region.re_min <= region.re_max) || !(region.im_min <= region.im_max))
    throw NumericalError(ErrorKind::InvalidArgument, "search region bounds are inverted");
  if (spec.alpha_is_zero()) return {};
  const double bottom = spec.op().lower_bound();
  const bool touches = region.im_min <= 0.0 && region.im_max >= 0.0 && region.re_max >= bottom;
  std::vector<EigenPair> roots;

  if (region.is_real() && touches) {
    if (!options.embedded || region.re_min <= bottom)
      throw NumericalError(ErrorKind::RegionTouchesSpectrum, "search interval meets the spectrum of A");
    embedded_search(spec, region, options, roots);
  } else {
    if (touches) throw NumericalError(ErrorKind::RegionTouchesSpectrum, "search region meets the spectrum of A");
    bool real_valued = false;
    if (region.is_real()) real_search(spec, region, options, roots, real_valued);
    if (!real_valued) {
      const auto starts = seeds.empty() ? automatic_seeds(region, options.seed_grid) : seeds;
      bool any = false;
      for (const auto& s : starts) {
        const auto r = damped_secant(spec, s, options);
        if (!r.converged) continue;
        any = true;
        Complex root = r.root;
        if (region.is_real() && std::abs(root.imag()) <= 1e-12 * (1.0 + std::abs(root))) root.imag(0.0);
        if (!region.contains(root, 1e-9 * (1.0 + std::abs(root)))) continue;
        add_root(roots, make_eigen_pair(spec, root, r.residual));
      }
      if (!seeds.empty() && !any)
        throw NumericalError(ErrorKind::NoConvergence, "no seed converged to a root");
    }
  }
  std::sort(roots.begin(), roots.end(), [](const EigenPair& a, const EigenPair& b) {
    return a.lambda.real() != b.lambda.real() ? a.lambda.real() < b.lambda.real() : a.lambda.imag() < b.lambda.imag();
  });
  return roots;
}

double verify_eigen(const PerturbationSpec& spec, const EigenPair& pair, std::vector<Complex> test_points) {
  const auto& op = spec.op();
  const double bottom = op.lower_bound();
  const double r = std::abs(pair.lambda);
  if (test_points.empty())
    test_points = {Complex(bottom - 2.0 - r, 0.0), Complex(bottom - 1.0, 1.0 + r), Complex(bottom + 1.0, -1.0 - r)};
  const ScaleVector phi = pair.phi * pair.phi_scale;
  Complex anchor = pair.lambda;
  if (pair.embedded)
    if (auto z = common_zero(spec.omega2(), pair.lambda.real(), false)) anchor = *z;
  const double phi_sq = std::pow(norm(op, phi, spec.options()), 2);

  double worst = 0.0;
  for (const auto& z : test_points) {
    const auto b = b_of_z(spec, z);
    if (b.infinite)
      throw NumericalError(ErrorKind::PerturbedEigenvalue, "test point is an eigenvalue of the perturbed operator");
    const auto n_conj = resolvent_apply(op, std::conj(z), spec.omega1());
    const double identity = std::abs((pair.lambda - z) * b.value * pairing(op, phi, n_conj, {}, spec.options()) - 1.0);
    const auto rebuilt = resolvent_apply(op, z, spec.omega2())
                             .filtered(SpectralRational::shift(z) * SpectralRational::resolvent(anchor));
    const double deviation = std::abs(pairing(op, phi - rebuilt, phi, {}, spec.options())) / phi_sq;
    worst = std::max(worst, identity + deviation);
  }
  return worst;
}

double eigenvector_deviation(const OperatorModel& op, const ScaleVector& a, const ScaleVector& b) {
  const double na = norm(op, a);
  const double nb = norm(op, b);
  if (!(na > 0.0) || !(nb > 0.0)) throw NumericalError(ErrorKind::InvalidArgument, "zero eigenvector");
  const double overlap = std::abs(pairing(op, a, b)) / (na * nb);
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap));
}

InverseProblem inverse_problem(const OperatorModel& op, Complex lambda, const ScaleVector& phi,
                               const ScaleVector& psi, Complex tau, const PairingOptions& options) {
  if (phi.is_zero() || psi.is_zero()) throw NumericalError(ErrorKind::InvalidArgument, "phi and psi must be nonzero");
  const int kphi = regularity_index(classify_regularity(op, phi));
  const int kpsi = regularity_index(classify_regularity(op, psi));
  if (kphi < 0 || kpsi < 0) throw NumericalError(ErrorKind::RegularityViolation, "phi and psi must lie in H");
  if (kphi == 2 && kpsi == 2)
    throw NumericalError(ErrorKind::RegularityViolation, "phi and psi in H+2 give a regular perturbation");

  auto omega2 = phi.filtered(SpectralRational::shift(lambda));
  auto omega1 = psi.filtered(SpectralRational::shift(std::conj(lambda)));
  if (omega1.is_zero() || omega2.is_zero())
    throw NumericalError(ErrorKind::EigenvectorOfA, "(A - lambda) annihilates the given vector");

  Complex alpha_inverse;
  TauPolicy policy = TauPolicy::fixed(tau);
  if (kphi >= 1 && kpsi >= 1) {
    policy = TauPolicy::automatic();
    alpha_inverse = -pairing(op, phi, omega1, {}, options);
  } else {
    alpha_inverse = -tau - pairing(op, omega2, omega1, regularized_weight(lambda), options);
  }
  if (std::abs(alpha_inverse) <= 1e-14)
    throw NumericalError(ErrorKind::DegenerateDenominator, "(phi, omega1) vanishes; alpha would be infinite");
  PerturbationSpec spec(op, omega1, omega2, 1.0 / alpha_inverse, policy, options);
  return {std::move(spec), lambda, phi, psi};
}

KreinData inverse_krein_data(const InverseProblem& problem, Complex z) {
  const auto& op = problem.spec.op();
  KreinData d;
  d.z = z;
  d.m_z = resolvent_apply(op, z, problem.phi).filtered(SpectralRational::shift(problem.lambda));
  d.n_z = resolvent_apply(op, z, problem.psi).filtered(SpectralRational::shift(std::conj(problem.lambda)));
  const auto n_conj =
      resolvent_apply(op, std::conj(z), problem.psi).filtered(SpectralRational::shift(std::conj(problem.lambda)));
  const Complex inverse_b = (problem.lambda - z) * pairing(op, problem.phi, n_conj, {}, problem.spec.options());
  d.F_value = regularized_F(problem.spec, z);
  if (inverse_b == Complex(0.0, 0.0)) d.b_z = {{0.0, 0.0}, true};
  else d.b_z = {1.0 / inverse_b, false};
  return d;
}

DualPair dual_pair(const OperatorModel& op, Complex mu, const ScaleVector& phi_lambda, const ScaleVector& psi_lambda,
                   const PairingOptions& options) {
  const auto r_mu_phi = resolvent_apply(op, mu, phi_lambda);
  const Complex numerator = pairing(op, phi_lambda, psi_lambda, {}, options);
  const Complex denominator = pairing(op, r_mu_phi, psi_lambda, {}, options);
  if (std::abs(denominator) <= 1e-14 * (1.0 + std::abs(numerator)))
    throw NumericalError(ErrorKind::DegenerateDenominator, "((A - mu)^-1 phi, psi) vanishes");
  const Complex lambda = mu + numerator / denominator;
  auto inverse = inverse_problem(op, lambda, phi_lambda, psi_lambda, 0.0, options);

  DualPair d{mu,
             lambda,
             phi_lambda,
             r_mu_phi.filtered(SpectralRational::shift(lambda)),
             psi_lambda,
             resolvent_apply(op, std::conj(mu), psi_lambda).filtered(SpectralRational::shift(std::conj(lambda))),
             *inverse.spec.alpha(),
             inverse.spec.omega1(),
             inverse.spec.omega2(),
             inverse.spec};
  d.condition_mu = std::abs(eigen_condition(d.spec, mu));
  d.condition_lambda = std::abs(eigen_condition(d.spec, lambda));
  d.pairing_residual = std::abs((lambda - mu) * denominator - numerator);
  return d;
}

}  // namespace perturbkit
