#include "perturbkit/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "perturbkit/errors.hpp"

namespace perturbkit {

namespace {

// Kronrod abscissae (descending) and weights; the odd entries are the 10-point
// Gauss nodes, whose weights are kGauss.
constexpr std::array<double, 11> kNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kKronrod = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kGauss = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  Complex value;
  double error = 0.0;
  bool mapped = false;  // integrand is evaluated through the t/(1-t) map
  double origin = 0.0;  // left end of the mapped half line

  bool operator<(const Panel& other) const { return error < other.error; }
};

class PanelRule {
 public:
  PanelRule(const std::function<Complex(double)>& f) : f_(f) {}

  Complex eval(const Panel& p, double t) const {
    if (!p.mapped) return f_(t);
    const double one_minus = 1.0 - t;
    const double x = p.origin + t / one_minus;
    return f_(x) / (one_minus * one_minus);
  }

  void apply(Panel& p) const {
    const double centre = 0.5 * (p.lo + p.hi);
    const double half = 0.5 * (p.hi - p.lo);
    const Complex fc = eval(p, centre);
    Complex gauss(0.0, 0.0);
    Complex kronrod = fc * kKronrod[10];
    double abs_sum = std::abs(fc) * kKronrod[10];
    std::array<Complex, 10> left{}, right{};
    for (std::size_t j = 0; j < 10; ++j) {
      const double dx = half * kNodes[j];
      left[j] = eval(p, centre - dx);
      right[j] = eval(p, centre + dx);
      const Complex sum = left[j] + right[j];
      kronrod += kKronrod[j] * sum;
      abs_sum += kKronrod[j] * (std::abs(left[j]) + std::abs(right[j]));
      if (j % 2 == 1) gauss += kGauss[j / 2] * sum;
    }
    const Complex mean = 0.5 * kronrod;
    double asc = kKronrod[10] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 10; ++j)
      asc += kKronrod[j] * (std::abs(left[j] - mean) + std::abs(right[j] - mean));

    p.value = kronrod * half;
    const double res_abs = abs_sum * std::abs(half);
    const double res_asc = asc * std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);
    if (!std::isfinite(std::abs(p.value)) || !std::isfinite(err)) err = std::numeric_limits<double>::infinity();
    p.error = err;
  }

 private:
  const std::function<Complex(double)>& f_;
};

}  // namespace

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1)
    throw NumericalError(ErrorKind::InvalidArgument,
                         "quadrature tolerances must be positive and max_subdivisions >= 1");
}

QuadratureResult integrate(const std::function<Complex(double)>& f, std::span<const double> breaks,
                           const QuadratureConfig& config) {
  config.validate();
  QuadratureResult result;
  if (breaks.size() < 2) return result;

  PanelRule rule(f);
  std::priority_queue<Panel> queue;
  std::vector<Panel> settled;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    if (!(b > a)) continue;
    Panel p;
    if (std::isinf(b)) {
      p.mapped = true;
      p.origin = a;
      p.lo = 0.0;
      p.hi = 1.0;
    } else {
      p.lo = a;
      p.hi = b;
    }
    rule.apply(p);
    queue.push(p);
  }

  auto totals = [&]() {
    Complex value(0.0, 0.0);
    double error = 0.0;
    std::priority_queue<Panel> copy = queue;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    for (const auto& p : settled) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  auto [value, error] = totals();
  int splits = 0;
  while (!queue.empty()) {
    const double target = std::max(config.abs_tol, config.rel_tol * std::abs(value));
    if (error <= target) break;
    if (splits >= config.max_subdivisions) {
      std::ostringstream msg;
      msg << "error estimate " << error << " above tolerance " << target << " after " << splits
          << " subdivisions";
      throw NumericalError(ErrorKind::QuadratureFailure, msg.str());
    }
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // Cannot be bisected in floating point any more.
      settled.push_back(worst);
      continue;
    }
    Panel left = worst, right = worst;
    left.hi = mid;
    right.lo = mid;
    rule.apply(left);
    rule.apply(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++splits;
    // Re-sum periodically so the running totals do not drift.
    if (splits % 64 == 0) std::tie(value, error) = totals();
  }

  std::tie(value, error) = totals();
  if (!std::isfinite(std::abs(value)))
    throw NumericalError(ErrorKind::QuadratureFailure, "integrand produced a non-finite value");
  const double target = std::max(config.abs_tol, config.rel_tol * std::abs(value));
  if (error > target) {
    std::ostringstream msg;
    msg << "error estimate " << error << " above tolerance " << target;
    throw NumericalError(ErrorKind::QuadratureFailure, msg.str());
  }
  result.value = value;
  result.error = error;
  result.subdivisions = splits;
  return result;
}

QuadratureResult integrate(const std::function<Complex(double)>& f, double a, double b,
                           const QuadratureConfig& config) {
  const std::array<double, 2> breaks{a, b};
  return integrate(f, breaks, config);
}

}  // namespace perturbkit
