#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace perturbkit::cli {

enum ExitCode { kOk = 0, kValidationError = 2, kNumericalFailure = 3, kCorpusMismatch = 4 };

/// Everything needed to rerun a task; embedded verbatim in report.json.
struct Invocation {
  std::string command;
  std::string config_source;
  std::string config_text;
  std::optional<double> tol;
  std::optional<std::string> region;
  std::optional<std::string> grid;
  std::vector<std::string> seeds;
};

Json invocation_json(const Invocation& inv);
Invocation invocation_from_json(const Json& value);

struct TaskResult {
  Json payload;
  Table table;
  int exit_code = kOk;
};

/// Parses the embedded config and applies the flag overrides.
ProblemConfig effective_config(const Invocation& inv);

/// Runs resolve, eigen, inverse, dualpair, approx, scatter or verify-examples.
/// Throws ConfigError and NumericalError.
TaskResult run_task(const Invocation& inv);

/// Full report document around a task result or an error.
Json make_report(const Invocation& inv, const TaskResult* result, const std::string& error_kind = {},
                 const std::string& error_message = {});

struct CheckOutcome {
  bool consistent = true;
  Json details;
};

/// Reruns the recorded invocation and compares every number, then checks the
/// task-specific residuals (eigenvalue conditions, realized tau, |S| symmetry).
CheckOutcome check_report(const Json& report);

/// PERTURBKIT_THREADS, else the hardware concurrency (at least 1).
unsigned thread_cap();

}  // namespace perturbkit::cli
