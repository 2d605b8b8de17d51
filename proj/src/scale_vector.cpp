#include "perturbkit/scale_vector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "perturbkit/errors.hpp"

namespace perturbkit {

Complex Tabulated::operator()(double x) const {
  if (grid.empty() || x < grid.front()) return {0.0, 0.0};
  if (x >= grid.back()) {
    if (x == grid.back()) return values.back();
    if (!extrapolate_tail) return {0.0, 0.0};
    return values.back() * std::pow(x / grid.back(), tail_slope());
  }
  const auto hi = std::upper_bound(grid.begin(), grid.end(), x);
  const auto i = static_cast<std::size_t>(hi - grid.begin());
  const double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return values[i - 1] * (1.0 - t) + values[i] * t;
}

double Tabulated::tail_slope() const {
  const std::size_t n = grid.size();
  if (n < 2) return 0.0;
  const double a = std::abs(values[n - 2]);
  const double b = std::abs(values[n - 1]);
  if (a <= 0.0 || b <= 0.0 || grid[n - 2] <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(b / a) / std::log(grid[n - 1] / grid[n - 2]);
}

std::optional<SpectralWindow> SpectralWindow::intersect(const SpectralWindow& other) const {
  SpectralWindow w{std::max(lower, other.lower), std::min(upper, other.upper)};
  if (w.empty()) return std::nullopt;
  return w;
}

std::string regularity_name(Regularity r) {
  switch (r) {
    case Regularity::PlusTwo: return "H+2";
    case Regularity::PlusOne: return "H+1\\H+2";
    case Regularity::Zero: return "H\\H+1";
    case Regularity::MinusOne: return "H-1\\H";
    case Regularity::MinusTwo: return "H-2\\H-1";
    case Regularity::Outside: return "outside";
  }
  return "unknown";
}

int regularity_index(Regularity r) {
  switch (r) {
    case Regularity::PlusTwo: return 2;
    case Regularity::PlusOne: return 1;
    case Regularity::Zero: return 0;
    case Regularity::MinusOne: return -1;
    case Regularity::MinusTwo: return -2;
    case Regularity::Outside: return -3;
  }
  return -3;
}

Regularity regularity_from_index(int k) {
  if (k >= 2) return Regularity::PlusTwo;
  switch (k) {
    case 1: return Regularity::PlusOne;
    case 0: return Regularity::Zero;
    case -1: return Regularity::MinusOne;
    case -2: return Regularity::MinusTwo;
    default: return Regularity::Outside;
  }
}

ScaleVector::ScaleVector(std::vector<VectorTerm> terms) {
  for (auto& t : terms) {
    if (t.coefficient == Complex(0.0, 0.0) || t.filter.is_zero()) continue;
    if (t.window && t.window->empty()) continue;
    terms_.push_back(std::move(t));
  }
}

ScaleVector ScaleVector::power_law(double exponent, double shift) {
  if (!std::isfinite(exponent) || !std::isfinite(shift))
    throw NumericalError(ErrorKind::InvalidArgument, "power law parameters must be finite");
  return ScaleVector({VectorTerm{{1.0, 0.0}, {}, std::nullopt, PowerLaw{exponent, shift}}});
}

ScaleVector ScaleVector::exp_abs(double rate, double center) {
  if (!(rate > 0.0) || !std::isfinite(rate) || !std::isfinite(center))
    throw NumericalError(ErrorKind::InvalidArgument, "exp_abs needs a finite rate > 0");
  return ScaleVector({VectorTerm{{1.0, 0.0}, {}, std::nullopt, ExpAbs{rate, center}}});
}

ScaleVector ScaleVector::delta(double point) { return delta({point, 0.0, 0.0}); }

ScaleVector ScaleVector::delta(std::array<double, 3> point) {
  return ScaleVector({VectorTerm{{1.0, 0.0}, {}, std::nullopt, Delta{point}}});
}

ScaleVector ScaleVector::tabulated(std::vector<double> grid, std::vector<Complex> values,
                                   bool extrapolate_tail) {
  if (grid.size() != values.size() || grid.size() < 2)
    throw NumericalError(ErrorKind::InvalidArgument, "tabulated vector needs >= 2 matching samples");
  if (!std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw NumericalError(ErrorKind::InvalidArgument, "tabulated grid must be strictly ascending");
  Tabulated tab{std::move(grid), std::move(values), extrapolate_tail};
  return ScaleVector({VectorTerm{{1.0, 0.0}, {}, std::nullopt, std::move(tab)}});
}

ScaleVector ScaleVector::filtered(const SpectralRational& filter) const {
  std::vector<VectorTerm> out = terms_;
  for (auto& t : out) t.filter = t.filter * filter;
  return ScaleVector(std::move(out));
}

ScaleVector ScaleVector::windowed(SpectralWindow window, Complex scale) const {
  if (window.empty())
    throw NumericalError(ErrorKind::InvalidArgument, "spectral window needs lower < upper");
  std::vector<VectorTerm> out;
  for (const auto& t : terms_) {
    VectorTerm w = t;
    if (w.window) {
      auto cut = w.window->intersect(window);
      if (!cut) continue;
      w.window = *cut;
    } else {
      w.window = window;
    }
    w.coefficient *= scale;
    out.push_back(std::move(w));
  }
  return ScaleVector(std::move(out));
}

ScaleVector ScaleVector::operator+(const ScaleVector& other) const {
  std::vector<VectorTerm> out = terms_;
  out.insert(out.end(), other.terms_.begin(), other.terms_.end());
  return ScaleVector(std::move(out));
}

ScaleVector ScaleVector::operator-(const ScaleVector& other) const {
  return *this + other * Complex(-1.0, 0.0);
}

ScaleVector ScaleVector::operator*(Complex c) const {
  std::vector<VectorTerm> out = terms_;
  for (auto& t : out) t.coefficient *= c;
  return ScaleVector(std::move(out));
}

bool ScaleVector::has_delta() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const VectorTerm& t) { return std::holds_alternative<Delta>(t.base); });
}

namespace {

void describe_rational(std::ostringstream& out, const SpectralRational& r) {
  if (r.is_identity()) return;
  out << "[" << r.scale();
  for (const auto& z : r.zeros()) out << "(A-" << z << ")";
  for (const auto& p : r.poles()) out << "/(A-" << p << ")";
  out << "]";
}

}  // namespace

std::string ScaleVector::describe() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  out.precision(6);
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) out << " + ";
    first = false;
    out << t.coefficient;
    describe_rational(out, t.filter);
    if (t.window) out << "E[" << t.window->lower << "," << t.window->upper << "]";
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, PowerLaw>) {
            out << "(x+" << p.shift << ")^" << p.exponent;
          } else if constexpr (std::is_same_v<T, ExpAbs>) {
            out << "exp(-" << p.rate << "|x-" << p.center << "|)";
          } else if constexpr (std::is_same_v<T, Delta>) {
            out << "delta(" << p.point[0] << "," << p.point[1] << "," << p.point[2] << ")";
          } else {
            out << "tab[" << p.grid.size() << "]";
          }
        },
        t.base);
  }
  return out.str();
}

}  // namespace perturbkit
