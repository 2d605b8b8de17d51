#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "perturbkit/errors.hpp"
#include "tasks.hpp"

using namespace perturbkit;
using namespace perturbkit::cli;

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  std::optional<double> tol;
  std::optional<std::string> region;
  std::optional<std::string> grid;
  std::vector<std::string> seeds;
  std::string format = "both";
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "Problem config (TOML)");
  sub->add_option("--out", f.out, "Output directory")->capture_default_str();
  sub->add_option("--tol", f.tol, "Quadrature tolerance (tighter than default, >= 1e-14)");
  sub->add_option("--region", f.region, "Eigenvalue search region a:b[:imag] or [a,b]");
  sub->add_option("--grid", f.grid, "Energy grid a:b:n");
  sub->add_option("--seed", f.seeds, "Eigenvalue seed re,im (repeatable)")->allow_extra_args(false);
  sub->add_option("--format", f.format, "json, csv or both")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int exit_for(const NumericalError& e) {
  return e.kind() == ErrorKind::InvalidArgument ? kValidationError : kNumericalFailure;
}

int run_command(const std::string& command, const Flags& f) {
  Invocation inv;
  inv.command = command;
  inv.tol = f.tol;
  inv.region = f.region;
  inv.grid = f.grid;
  inv.seeds = f.seeds;
  std::filesystem::create_directories(f.out);
  const auto report_path = (std::filesystem::path(f.out) / "report.json").string();
  const auto table_path = (std::filesystem::path(f.out) / "table.csv").string();

  auto fail = [&](int code, const std::string& kind, const std::string& message) {
    std::cerr << "perturbkit " << command << ": " << message << "\n";
    if (f.format != "csv") write_atomic(report_path, dump_json(make_report(inv, nullptr, kind, message)));
    return code;
  };
  try {
    if (!f.config.empty()) {
      inv.config_source = f.config;
      inv.config_text = read_file(f.config);
    } else if (command != "verify-examples") {
      throw ConfigError("--config", "required for " + command);
    }
    const auto result = run_task(inv);
    if (f.format != "csv") write_atomic(report_path, dump_json(make_report(inv, &result)));
    if (f.format != "json" && !result.table.empty()) write_atomic(table_path, render_csv(result.table));
    if (command == "verify-examples") {
      for (const auto& c : result.payload.at("cases"))
        std::cout << "example " << c.at("id").get<int>() << ": " << (c.at("passed").get<bool>() ? "pass" : "FAIL")
                  << "\n";
    }
    return result.exit_code;
  } catch (const ConfigError& e) {
    return fail(kValidationError, "ConfigError", e.what());
  } catch (const NumericalError& e) {
    return fail(exit_for(e), std::string(error_name(e.kind())), e.what());
  } catch (const std::exception& e) {
    return fail(kNumericalFailure, "Unexpected", e.what());
  }
}

int run_check(const std::string& path, const std::string& out_dir) {
  try {
    const auto report = Json::parse(read_file(path));
    const auto outcome = check_report(report);
    std::filesystem::create_directories(out_dir);
    Json doc;
    doc["report"] = path;
    doc["consistent"] = outcome.consistent;
    doc["details"] = outcome.details;
    write_atomic((std::filesystem::path(out_dir) / "check.json").string(), dump_json(doc));
    std::cout << (outcome.consistent ? "consistent" : "INCONSISTENT") << "\n";
    return outcome.consistent ? kOk : kNumericalFailure;
  } catch (const ConfigError& e) {
    std::cerr << "perturbkit check: " << e.what() << "\n";
    return kValidationError;
  } catch (const NumericalError& e) {
    std::cerr << "perturbkit check: " << e.what() << "\n";
    return exit_for(e);
  } catch (const Json::exception& e) {
    std::cerr << "perturbkit check: malformed report: " << e.what() << "\n";
    return kValidationError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-one singular perturbations: resolvents, eigenvalues, scattering"};
  app.require_subcommand(0, 1);
  std::string check_path;
  Flags flags;
  app.add_option("--check", check_path, "Recompute and compare a report.json");
  app.add_option("--out", flags.out, "Output directory for check.json");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"resolve", "Krein resolvent data at the task's z points"},
      {"eigen", "Eigenvalues inside a search region"},
      {"inverse", "Perturbation with a prescribed eigenvalue and eigenvectors"},
      {"dualpair", "Dual eigenvalue pair from one eigenvector pair"},
      {"approx", "Spectral-window approximation sequence and resolvent gaps"},
      {"scatter", "Boundary values and scattering matrix on an energy grid"},
      {"verify-examples", "Run the worked-example corpus"}};
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), flags);
  auto* check = app.add_subcommand("check", "Recompute and compare a report.json");
  std::string check_positional;
  check->add_option("report", check_positional, "report.json")->required();
  check->add_option("--out", flags.out, "Output directory for check.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidationError;
  }

  if (*check) return run_check(check_positional, flags.out);
  if (!check_path.empty()) return run_check(check_path, flags.out);
  for (const auto* sub : app.get_subcommands()) return run_command(sub->get_name(), flags);
  std::cerr << app.help();
  return kValidationError;
}
