#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "perturbkit/eigensolver.hpp"
#include "perturbkit/scattering.hpp"

namespace perturbkit::cli {

/// Schema violation; `path` names the offending field, e.g. "vectors.w1.exponent".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct EnergyGrid {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  std::vector<double> points() const;
};

struct TaskConfig {
  std::string kind;
  std::vector<Complex> z_points;          // resolve
  std::optional<SearchRegion> region;     // eigen
  std::vector<Complex> seeds;             // eigen
  bool embedded = false;                  // eigen
  Complex lambda{0.0, 0.0};               // inverse
  Complex mu{0.0, 0.0};                   // dualpair
  std::string phi, psi;                   // inverse, dualpair
  Complex tau{0.0, 0.0};                  // inverse (explicit case), approx
  std::optional<EnergyGrid> grid;         // scatter
  BoundaryMethod method = BoundaryMethod::Plemelj;
  std::vector<double> n_ladder;           // approx
  Complex gap_z{-1.0, 0.0};               // approx
  std::vector<int> examples;              // verify-examples
};

struct ProblemConfig {
  std::optional<OperatorModel> op;
  std::map<std::string, ScaleVector> vectors;
  std::string omega1, omega2;
  bool has_perturbation = false;
  std::optional<Complex> alpha;  // nullopt is the Zero marker
  TauPolicy tau = TauPolicy::automatic();
  TaskConfig task;
  PairingOptions options;

  const OperatorModel& require_operator() const;
  const ScaleVector& vector(const std::string& name, const std::string& path) const;
  PerturbationSpec spec() const;
};

ProblemConfig parse_config(const std::string& toml_text, const std::string& source = "config");
ProblemConfig load_config(const std::string& path);

/// "a:b", "[a,b]", "a:b:h" (imaginary part in [-h, h]) or "a:b:c:d".
SearchRegion parse_region(const std::string& text);
/// "a:b:n".
EnergyGrid parse_grid(const std::string& text);
/// "re,im" or "re".
Complex parse_complex(const std::string& text);

/// Tightens the quadrature tolerances; looser than the default or below 1e-14 is rejected.
void apply_tolerance(ProblemConfig& config, double tol);

}  // namespace perturbkit::cli
