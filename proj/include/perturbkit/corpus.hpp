#pragma once

#include <string>
#include <vector>

#include "perturbkit/krein.hpp"

namespace perturbkit {

enum class Provenance { Paper, DerivedOracle };

std::string provenance_name(Provenance p);

struct GoldenEntry {
  std::string name;
  std::string operation;  // public operation producing `computed`
  Complex computed{0.0, 0.0};
  Complex golden{0.0, 0.0};
  double tolerance = 0.0;
  Provenance provenance = Provenance::Paper;
  std::string note;
  /// Reported for reference; excluded from the pass verdict.
  bool informational = false;
  bool pass = false;
  double error() const { return std::abs(computed - golden); }
};

struct SpectralReport {
  int id = 0;
  std::string title;
  std::string backend;
  std::vector<GoldenEntry> entries;
  double runtime_ms = 0.0;
  bool passed() const;
};

/// Ids of the worked examples, 1..6.
std::vector<int> example_ids();

/// Computes every golden quantity of one example. Numerical failures are
/// recorded as failed entries; throws InvalidArgument only for unknown ids.
SpectralReport run_example(int id);

}  // namespace perturbkit
