#include "perturbkit/operator_model.hpp"

#include <cmath>
#include <sstream>

#include "perturbkit/errors.hpp"

namespace perturbkit {

std::string backend_name(Backend backend) {
  switch (backend) {
    case Backend::Multiplication: return "multiplication";
    case Backend::LaplaceLine: return "laplace_line";
    case Backend::LaplaceSpace3D: return "laplace_space3d";
  }
  return "unknown";
}

OperatorModel OperatorModel::multiplication(double power, double domain_start) {
  if (!(power > 0.0) || !std::isfinite(power))
    throw NumericalError(ErrorKind::InvalidArgument, "symbol power must be positive");
  if (!(domain_start >= 0.0) || !std::isfinite(domain_start))
    throw NumericalError(ErrorKind::InvalidArgument, "domain start must be a finite number >= 0");
  OperatorModel op;
  op.backend_ = Backend::Multiplication;
  op.power_ = power;
  op.domain_start_ = domain_start;
  return op;
}

OperatorModel OperatorModel::laplace_line() {
  OperatorModel op;
  op.backend_ = Backend::LaplaceLine;
  op.power_ = 2.0;
  return op;
}

OperatorModel OperatorModel::laplace_space3d() {
  OperatorModel op;
  op.backend_ = Backend::LaplaceSpace3D;
  op.power_ = 2.0;
  return op;
}

double OperatorModel::lower_bound() const {
  if (backend_ != Backend::Multiplication) return 0.0;
  return std::pow(domain_start_, power_);
}

double OperatorModel::symbol(double x) const { return std::pow(x, power_); }

double OperatorModel::symbol_derivative(double x) const {
  return power_ * std::pow(x, power_ - 1.0);
}

double OperatorModel::preimage(double l) const {
  if (backend_ != Backend::Multiplication)
    throw NumericalError(ErrorKind::UnsupportedBackend, "preimage requires the multiplication backend");
  if (l <= lower_bound()) return domain_start_;
  return std::pow(l, 1.0 / power_);
}

bool OperatorModel::in_spectrum(Complex z) const {
  return z.imag() == 0.0 && z.real() >= lower_bound();
}

double OperatorModel::symbol_power() const { return power_; }

double OperatorModel::measure_power() const {
  return backend_ == Backend::LaplaceSpace3D ? 2.0 : 0.0;
}

std::string OperatorModel::describe() const {
  std::ostringstream out;
  switch (backend_) {
    case Backend::Multiplication:
      out << "multiplication by x^" << power_ << " on [" << domain_start_ << ", inf)";
      break;
    case Backend::LaplaceLine: out << "-d^2/dx^2 on R"; break;
    case Backend::LaplaceSpace3D: out << "-Laplacian on R^3"; break;
  }
  return out.str();
}

}  // namespace perturbkit
