#include "tasks.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>

#include "perturbkit/approximation.hpp"
#include "perturbkit/corpus.hpp"
#include "perturbkit/errors.hpp"

namespace perturbkit::cli {

namespace {

// Runs fn(i) for i in [0, count) on up to thread_cap() threads; rethrows the
// first failure by index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(thread_cap(), count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string tau_policy_name(const TauPolicy& p) { return p.kind == TauPolicy::Kind::Auto ? "auto" : "explicit"; }

Json spec_json(const PerturbationSpec& spec) {
  Json j;
  j["operator"] = spec.op().describe();
  j["omega1"] = spec.omega1().describe();
  j["omega2"] = spec.omega2().describe();
  j["alpha"] = spec.alpha() ? complex_json(*spec.alpha()) : Json("zero");
  j["tau_policy"] = tau_policy_name(spec.tau_policy());
  j["tau"] = complex_json(spec.tau());
  return j;
}

std::string regularity_text(const OperatorModel& op, const ScaleVector& v) {
  try {
    return regularity_name(classify_regularity(op, v));
  } catch (const NumericalError& e) {
    return std::string(error_name(e.kind()));
  }
}

std::vector<std::string> complex_cells(Complex z) { return {format_double(z.real()), format_double(z.imag())}; }

void append(std::vector<std::string>& row, const std::vector<std::string>& more) {
  row.insert(row.end(), more.begin(), more.end());
}

TaskResult run_resolve(const ProblemConfig& config) {
  const auto spec = config.spec();
  if (config.task.z_points.empty()) throw ConfigError("task.z", "resolve needs at least one z");
  TaskResult r;
  r.payload["spec"] = spec_json(spec);
  r.table.header = {"z_re", "z_im", "F_re", "F_im", "b_re", "b_im", "b_infinite"};
  Json points = Json::array();
  for (Complex z : config.task.z_points) {
    const auto data = krein_data(spec, z);
    Json p;
    p["z"] = complex_json(z);
    p["F"] = complex_json(data.F_value);
    p["b"] = complex_json(data.b_z.value);
    p["b_infinite"] = data.b_z.infinite;
    p["n_z"] = data.n_z.describe();
    p["m_z"] = data.m_z.describe();
    points.push_back(p);
    std::vector<std::string> row = complex_cells(z);
    append(row, complex_cells(data.F_value));
    append(row, complex_cells(data.b_z.value));
    row.push_back(data.b_z.infinite ? "true" : "false");
    r.table.rows.push_back(row);
  }
  r.payload["points"] = points;
  return r;
}

TaskResult run_eigen(const ProblemConfig& config) {
  const auto spec = config.spec();
  if (!config.task.region) throw ConfigError("task.region", "eigen needs a search region (or --region)");
  EigenSearchOptions options;
  options.embedded = config.task.embedded;
  const auto found = find_eigenvalues(spec, *config.task.region, config.task.seeds, options);
  TaskResult r;
  r.payload["spec"] = spec_json(spec);
  const auto& region = *config.task.region;
  r.payload["region"] = Json{{"re_min", region.re_min}, {"re_max", region.re_max}, {"im_min", region.im_min},
                             {"im_max", region.im_max}};
  r.table.header = {"lambda_re", "lambda_im", "residual", "verify", "embedded"};
  Json list = Json::array();
  for (const auto& pair : found) {
    const double verify = verify_eigen(spec, pair);
    list.push_back(Json{{"lambda", complex_json(pair.lambda)},
                        {"residual", real_json(pair.residual)},
                        {"verify", real_json(verify)},
                        {"embedded", pair.embedded},
                        {"phi", pair.phi.describe()},
                        {"psi", pair.psi.describe()}});
    std::vector<std::string> row = complex_cells(pair.lambda);
    append(row, {format_double(pair.residual), format_double(verify), pair.embedded ? "true" : "false"});
    r.table.rows.push_back(row);
  }
  r.payload["eigenvalues"] = list;
  return r;
}

TaskResult run_inverse(const ProblemConfig& config) {
  const auto& op = config.require_operator();
  const auto& phi = config.vector(config.task.phi, "task.phi");
  const auto& psi = config.vector(config.task.psi, "task.psi");
  const auto problem = inverse_problem(op, config.task.lambda, phi, psi, config.task.tau, config.options);
  TaskResult r;
  r.payload["lambda"] = complex_json(problem.lambda);
  r.payload["spec"] = spec_json(problem.spec);
  r.payload["regularity"] = Json{{"phi", regularity_text(op, phi)},
                                 {"psi", regularity_text(op, psi)},
                                 {"omega1", regularity_text(op, problem.spec.omega1())},
                                 {"omega2", regularity_text(op, problem.spec.omega2())}};
  const bool embedded = op.in_spectrum(problem.lambda);
  r.payload["embedded"] = embedded;
  r.payload["condition_at_lambda"] =
      embedded ? Json(nullptr) : real_json(std::abs(eigen_condition(problem.spec, problem.lambda)));
  r.table.header = {"lambda_re", "lambda_im", "alpha_re", "alpha_im", "tau_re", "tau_im", "tau_policy"};
  std::vector<std::string> row = complex_cells(problem.lambda);
  append(row, complex_cells(problem.spec.alpha().value_or(0.0)));
  append(row, complex_cells(problem.spec.tau()));
  row.push_back(tau_policy_name(problem.spec.tau_policy()));
  r.table.rows.push_back(row);
  return r;
}

TaskResult run_dualpair(const ProblemConfig& config) {
  const auto& op = config.require_operator();
  const auto pair = dual_pair(op, config.task.mu, config.vector(config.task.phi, "task.phi"),
                              config.vector(config.task.psi, "task.psi"), config.options);
  TaskResult r;
  r.payload["mu"] = complex_json(pair.mu);
  r.payload["lambda"] = complex_json(pair.lambda);
  r.payload["alpha"] = complex_json(pair.alpha);
  r.payload["spec"] = spec_json(pair.spec);
  r.payload["condition_mu"] = real_json(pair.condition_mu);
  r.payload["condition_lambda"] = real_json(pair.condition_lambda);
  r.payload["pairing_residual"] = real_json(pair.pairing_residual);
  r.payload["phi_mu"] = pair.phi_mu.describe();
  r.payload["psi_mu"] = pair.psi_mu.describe();
  r.table.header = {"mu_re", "mu_im", "lambda_re", "lambda_im", "alpha_re", "alpha_im", "condition_mu",
                    "condition_lambda"};
  std::vector<std::string> row = complex_cells(pair.mu);
  append(row, complex_cells(pair.lambda));
  append(row, complex_cells(pair.alpha));
  append(row, {format_double(pair.condition_mu), format_double(pair.condition_lambda)});
  r.table.rows.push_back(row);
  return r;
}

TaskResult run_approx(const ProblemConfig& config) {
  const auto limit = config.spec();
  if (limit.tau_policy().kind != TauPolicy::Kind::Explicit)
    throw ConfigError("perturbation.tau", "approx needs an explicit tau to match");
  if (config.task.n_ladder.empty()) throw ConfigError("task.n", "approx needs an n ladder");
  const auto& ladder = config.task.n_ladder;
  const Complex z = config.task.gap_z;
  const auto probes = default_probes(limit.op());
  std::vector<ApproxSequenceStep> steps(ladder.size());
  std::vector<GapReport> gaps(ladder.size());
  parallel_for(ladder.size(), [&](std::size_t i) {
    steps[i] = build_matching_step(limit.op(), limit.omega1(), limit.omega2(), limit.tau(), ladder[i], {},
                                   config.options);
    gaps[i] = resolvent_gap(step_spec(limit, steps[i]), limit, z, probes);
  });
  TaskResult r;
  r.payload["spec"] = spec_json(limit);
  r.payload["z"] = complex_json(z);
  r.table.header = {"n", "a_n", "b_n", "eps1", "eps2", "c_n", "d_n", "realized_tau", "gap", "omega1_error",
                    "omega2_error", "pairing_gap"};
  Json list = Json::array();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    const auto& g = gaps[i];
    list.push_back(Json{{"n", s.n},
                        {"a_n", real_json(s.a_n)},
                        {"b_n", real_json(s.b_n)},
                        {"eps1", real_json(s.eps1_n)},
                        {"eps2", real_json(s.eps2_n)},
                        {"window", Json{{"c", real_json(s.window.lower)}, {"d", real_json(s.window.upper)}}},
                        {"realized_tau", real_json(s.realized)},
                        {"gap", real_json(g.gap)},
                        {"omega1_error", real_json(g.omega1_error)},
                        {"omega2_error", real_json(g.omega2_error)},
                        {"pairing_gap", real_json(g.pairing_gap)}});
    r.table.rows.push_back({format_double(s.n), format_double(s.a_n), format_double(s.b_n), format_double(s.eps1_n),
                            format_double(s.eps2_n), format_double(s.window.lower), format_double(s.window.upper),
                            format_double(s.realized), format_double(g.gap), format_double(g.omega1_error),
                            format_double(g.omega2_error), format_double(g.pairing_gap)});
  }
  r.payload["steps"] = list;
  return r;
}

TaskResult run_scatter(const ProblemConfig& config) {
  const auto spec = config.spec();
  if (!config.task.grid) throw ConfigError("task.grid", "scatter needs an energy grid (or --grid)");
  const auto energies = config.task.grid->points();
  std::vector<ScatteringSample> samples(energies.size());
  std::vector<std::string> methods(energies.size(), "none");
  parallel_for(energies.size(), [&](std::size_t i) {
    if (spec.alpha_is_zero()) {
      samples[i] = smatrix(spec, energies[i], config.task.method);
      return;
    }
    const auto bv = boundary_value(spec, energies[i], config.task.method);
    methods[i] = boundary_method_name(bv.method);
    samples[i] = smatrix(spec, bv);
  });
  TaskResult r;
  r.payload["spec"] = spec_json(spec);
  r.table.header = {"lambda", "S_re", "S_im", "S_abs", "S_arg", "amp_plus_re", "amp_plus_im", "amp_minus_re",
                    "amp_minus_im", "singular", "method"};
  Json list = Json::array();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    list.push_back(Json{{"lambda", s.lambda},
                        {"S", complex_json(s.S)},
                        {"S_abs", real_json(std::abs(s.S))},
                        {"S_arg", real_json(std::arg(s.S))},
                        {"amplitude_plus", complex_json(s.amplitude_plus)},
                        {"amplitude_minus", complex_json(s.amplitude_minus)},
                        {"singular", s.singular},
                        {"method", methods[i]}});
    std::vector<std::string> row{format_double(s.lambda)};
    append(row, complex_cells(s.S));
    append(row, {format_double(std::abs(s.S)), format_double(std::arg(s.S))});
    append(row, complex_cells(s.amplitude_plus));
    append(row, complex_cells(s.amplitude_minus));
    append(row, {s.singular ? "true" : "false", methods[i]});
    r.table.rows.push_back(row);
  }
  r.payload["samples"] = list;
  return r;
}

TaskResult run_verify(const ProblemConfig& config) {
  auto ids = config.task.examples.empty() ? example_ids() : config.task.examples;
  std::vector<SpectralReport> reports(ids.size());
  parallel_for(ids.size(), [&](std::size_t i) { reports[i] = run_example(ids[i]); });
  TaskResult r;
  r.table.header = {"example", "quantity", "operation", "computed_re", "computed_im", "golden_re", "golden_im",
                    "error", "tolerance", "provenance", "informational", "pass"};
  Json cases = Json::array();
  bool all = true;
  for (const auto& rep : reports) {
    Json entries = Json::array();
    for (const auto& e : rep.entries) {
      entries.push_back(Json{{"name", e.name},
                             {"operation", e.operation},
                             {"computed", complex_json(e.computed)},
                             {"golden", complex_json(e.golden)},
                             {"error", real_json(e.error())},
                             {"tolerance", e.tolerance},
                             {"provenance", provenance_name(e.provenance)},
                             {"informational", e.informational},
                             {"pass", e.pass},
                             {"note", e.note}});
      std::vector<std::string> row{std::to_string(rep.id), e.name, e.operation};
      append(row, complex_cells(e.computed));
      append(row, complex_cells(e.golden));
      append(row, {format_double(e.error()), format_double(e.tolerance), provenance_name(e.provenance),
                   e.informational ? "true" : "false", e.pass ? "true" : "false"});
      r.table.rows.push_back(row);
    }
    cases.push_back(Json{{"id", rep.id},
                         {"title", rep.title},
                         {"backend", rep.backend},
                         {"passed", rep.passed()},
                         {"entries", entries}});
    all = all && rep.passed();
  }
  r.payload["passed"] = all;
  r.payload["cases"] = cases;
  if (!all) r.exit_code = kCorpusMismatch;
  return r;
}

// Numeric comparison of two payloads; collects differing paths.
void compare(const Json& a, const Json& b, const std::string& path, double tol, Json& diffs) {
  if (a.is_object() && b.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) {
        diffs.push_back(path + "/" + it.key() + " missing");
        continue;
      }
      compare(it.value(), b.at(it.key()), path + "/" + it.key(), tol, diffs);
    }
    return;
  }
  if (a.is_array() && b.is_array()) {
    if (a.size() != b.size()) {
      diffs.push_back(path + " length " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) compare(a[i], b[i], path + "/" + std::to_string(i), tol, diffs);
    return;
  }
  if (a.is_number_float() || b.is_number_float()) {
    try {
      const double x = real_from_json(a);
      const double y = real_from_json(b);
      const bool same = (std::isnan(x) && std::isnan(y)) || x == y || std::abs(x - y) <= tol * (1.0 + std::abs(x));
      if (!same) diffs.push_back(path + " " + format_double(x) + " vs " + format_double(y));
    } catch (const std::exception&) {
      diffs.push_back(path + " type mismatch");
    }
    return;
  }
  if (a != b) diffs.push_back(path + " " + a.dump() + " vs " + b.dump());
}

}  // namespace

unsigned thread_cap() {
  if (const char* env = std::getenv("PERTURBKIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Json invocation_json(const Invocation& inv) {
  Json j;
  j["command"] = inv.command;
  j["config_source"] = inv.config_source;
  j["config_text"] = inv.config_text;
  j["tol"] = inv.tol ? Json(*inv.tol) : Json(nullptr);
  j["region"] = inv.region ? Json(*inv.region) : Json(nullptr);
  j["grid"] = inv.grid ? Json(*inv.grid) : Json(nullptr);
  j["seeds"] = inv.seeds;
  return j;
}

Invocation invocation_from_json(const Json& j) {
  Invocation inv;
  inv.command = j.at("command").get<std::string>();
  inv.config_source = j.at("config_source").get<std::string>();
  inv.config_text = j.at("config_text").get<std::string>();
  if (!j.at("tol").is_null()) inv.tol = j.at("tol").get<double>();
  if (!j.at("region").is_null()) inv.region = j.at("region").get<std::string>();
  if (!j.at("grid").is_null()) inv.grid = j.at("grid").get<std::string>();
  inv.seeds = j.at("seeds").get<std::vector<std::string>>();
  return inv;
}

ProblemConfig effective_config(const Invocation& inv) {
  auto config = parse_config(inv.config_text, inv.config_source.empty() ? "config" : inv.config_source);
  if (!config.task.kind.empty() && config.task.kind != inv.command)
    throw ConfigError("task.kind", "config describes '" + config.task.kind + "' but '" + inv.command + "' was run");
  config.task.kind = inv.command;
  if (inv.tol) apply_tolerance(config, *inv.tol);
  if (inv.region) config.task.region = parse_region(*inv.region);
  if (inv.grid) config.task.grid = parse_grid(*inv.grid);
  for (const auto& s : inv.seeds) config.task.seeds.push_back(parse_complex(s));
  return config;
}

TaskResult run_task(const Invocation& inv) {
  const auto config = effective_config(inv);
  const auto& c = inv.command;
  if (c == "resolve") return run_resolve(config);
  if (c == "eigen") return run_eigen(config);
  if (c == "inverse") return run_inverse(config);
  if (c == "dualpair") return run_dualpair(config);
  if (c == "approx") return run_approx(config);
  if (c == "scatter") return run_scatter(config);
  if (c == "verify-examples") return run_verify(config);
  throw ConfigError("command", "unknown task '" + c + "'");
}

Json make_report(const Invocation& inv, const TaskResult* result, const std::string& error_kind,
                 const std::string& error_message) {
  Json report;
  report["tool"] = "perturbkit";
  report["format_version"] = 1;
  report["command"] = inv.command;
  if (result) {
    report["status"] = result->exit_code == kOk ? "ok" : "mismatch";
  } else {
    report["status"] = "error";
  }
  report["invocation"] = invocation_json(inv);
  if (result) report["result"] = result->payload;
  else report["error"] = Json{{"kind", error_kind}, {"message", error_message}};
  return report;
}

CheckOutcome check_report(const Json& report) {
  CheckOutcome out;
  const auto inv = invocation_from_json(report.at("invocation"));
  out.details["command"] = inv.command;
  if (!report.contains("result")) {
    out.consistent = false;
    out.details["reason"] = "report carries no result";
    return out;
  }
  const auto rerun = run_task(inv);
  Json diffs = Json::array();
  compare(report.at("result"), rerun.payload, "", 1e-9, diffs);

  Json residuals = Json::array();
  const auto config = effective_config(inv);
  const auto& result = report.at("result");
  if (inv.command == "eigen") {
    const auto spec = config.spec();
    for (const auto& e : result.at("eigenvalues")) {
      const Complex lambda = complex_from_json(e.at("lambda"));
      double r = 0.0;
      if (e.at("embedded").get<bool>()) {
        const auto bv = boundary_value(spec, lambda.real());
        const Complex base = spec.alpha_inverse() + spec.tau();
        r = std::abs(base + 0.5 * (bv.F_plus + bv.F_minus));
      } else {
        r = std::abs(eigen_condition(spec, lambda));
      }
      residuals.push_back(Json{{"lambda", complex_from_json(e.at("lambda")).real()}, {"condition", real_json(r)}});
      if (!(r < 1e-8)) diffs.push_back("eigenvalue condition " + format_double(r));
    }
  } else if (inv.command == "approx") {
    const auto spec = config.spec();
    for (const auto& s : result.at("steps")) {
      const double gap = std::abs(real_from_json(s.at("realized_tau")) - spec.tau().real());
      residuals.push_back(Json{{"n", s.at("n")}, {"tau_gap", real_json(gap)}});
      if (!(gap < 1e-8)) diffs.push_back("realized tau off by " + format_double(gap));
    }
  } else if (inv.command == "dualpair") {
    for (const char* key : {"condition_mu", "condition_lambda"}) {
      const double r = real_from_json(result.at(key));
      residuals.push_back(Json{{key, real_json(r)}});
      if (!(r < 1e-8)) diffs.push_back(std::string(key) + " " + format_double(r));
    }
  }
  out.details["residuals"] = residuals;
  out.details["differences"] = diffs;
  out.consistent = diffs.empty();
  return out;
}

}  // namespace perturbkit::cli
