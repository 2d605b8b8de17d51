#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <toml.hpp>

namespace perturbkit::cli {

namespace {

constexpr double kEpsilonGuard = 1e-14;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double as_number(const toml::node* node, const std::string& path) {
  if (!node) throw ConfigError(path, "missing number");
  if (auto v = node->value<double>()) return *v;
  throw ConfigError(path, "expected a number");
}

double number_or(const toml::table& t, const std::string& key, const std::string& path, double fallback) {
  const auto* node = t.get(key);
  return node ? as_number(node, join(path, key)) : fallback;
}

std::string string_or(const toml::table& t, const std::string& key, const std::string& path, std::string fallback) {
  const auto* node = t.get(key);
  if (!node) return fallback;
  if (auto v = node->value<std::string>()) return *v;
  throw ConfigError(join(path, key), "expected a string");
}

std::string required_string(const toml::table& t, const std::string& key, const std::string& path) {
  if (!t.get(key)) throw ConfigError(join(path, key), "missing");
  return string_or(t, key, path, {});
}

const toml::table& as_table(const toml::node* node, const std::string& path) {
  if (!node || !node->is_table()) throw ConfigError(path, "expected a table");
  return *node->as_table();
}

const toml::array& as_array(const toml::node* node, const std::string& path) {
  if (!node || !node->is_array()) throw ConfigError(path, "expected an array");
  return *node->as_array();
}

// Complex numbers are {re = .., im = ..} records; a bare number is real.
Complex as_complex(const toml::node* node, const std::string& path) {
  if (!node) throw ConfigError(path, "missing complex value");
  if (node->is_number()) return as_number(node, path);
  const auto& t = as_table(node, path);
  for (auto&& [key, _] : t)
    if (key.str() != "re" && key.str() != "im") throw ConfigError(join(path, std::string(key.str())), "unknown field");
  return {number_or(t, "re", path, 0.0), number_or(t, "im", path, 0.0)};
}

std::vector<double> number_list(const toml::node* node, const std::string& path) {
  std::vector<double> out;
  const auto& a = as_array(node, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_number(a.get(i), path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Complex> complex_list(const toml::node* node, const std::string& path) {
  std::vector<Complex> out;
  const auto& a = as_array(node, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_complex(a.get(i), path + "[" + std::to_string(i) + "]"));
  return out;
}

void reject_unknown(const toml::table& t, const std::string& path, std::initializer_list<const char*> allowed) {
  for (auto&& [key, _] : t) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key.str() == a;
    if (!ok) throw ConfigError(join(path, std::string(key.str())), "unknown field");
  }
}

OperatorModel parse_operator(const toml::table& t, const std::string& path) {
  reject_unknown(t, path, {"backend", "power", "start"});
  const auto backend = required_string(t, "backend", path);
  if (backend == "multiplication") {
    const double power = number_or(t, "power", path, 1.0);
    const double start = number_or(t, "start", path, 0.0);
    if (!(power > 0.0)) throw ConfigError(join(path, "power"), "must be positive");
    if (!(start >= 0.0)) throw ConfigError(join(path, "start"), "must be nonnegative");
    return OperatorModel::multiplication(power, start);
  }
  if (backend == "laplace_line") return OperatorModel::laplace_line();
  if (backend == "laplace_space3d") return OperatorModel::laplace_space3d();
  throw ConfigError(join(path, "backend"), "expected multiplication, laplace_line or laplace_space3d");
}

ScaleVector parse_primitive(const toml::table& t, const std::string& path) {
  reject_unknown(t, path, {"kind", "exponent", "shift", "rate", "center", "point", "grid", "values", "extrapolate_tail",
                           "coef", "window", "zeros", "poles"});
  const auto kind = required_string(t, "kind", path);
  ScaleVector v;
  if (kind == "power_law") {
    v = ScaleVector::power_law(as_number(t.get("exponent"), join(path, "exponent")), number_or(t, "shift", path, 0.0));
  } else if (kind == "exp_abs") {
    v = ScaleVector::exp_abs(as_number(t.get("rate"), join(path, "rate")), number_or(t, "center", path, 0.0));
  } else if (kind == "delta") {
    const auto* point = t.get("point");
    if (point && point->is_array()) {
      const auto p = number_list(point, join(path, "point"));
      if (p.size() == 1) v = ScaleVector::delta(p[0]);
      else if (p.size() == 3) v = ScaleVector::delta(std::array<double, 3>{p[0], p[1], p[2]});
      else throw ConfigError(join(path, "point"), "expected 1 or 3 coordinates");
    } else {
      v = ScaleVector::delta(number_or(t, "point", path, 0.0));
    }
  } else if (kind == "tabulated") {
    auto grid = number_list(t.get("grid"), join(path, "grid"));
    auto values = complex_list(t.get("values"), join(path, "values"));
    bool tail = false;
    if (const auto* node = t.get("extrapolate_tail")) {
      auto b = node->value<bool>();
      if (!b) throw ConfigError(join(path, "extrapolate_tail"), "expected a boolean");
      tail = *b;
    }
    v = ScaleVector::tabulated(std::move(grid), std::move(values), tail);
  } else {
    throw ConfigError(join(path, "kind"), "expected power_law, exp_abs, delta or tabulated");
  }

  SpectralRational filter;
  if (const auto* zeros = t.get("zeros"))
    for (double z : number_list(zeros, join(path, "zeros"))) filter = filter * SpectralRational::shift(z);
  if (const auto* poles = t.get("poles"))
    for (Complex p : complex_list(poles, join(path, "poles"))) filter = filter * SpectralRational::resolvent(p);
  if (!filter.is_identity()) v = v.filtered(filter);
  if (const auto* window = t.get("window")) {
    const auto w = number_list(window, join(path, "window"));
    if (w.size() != 2 || !(w[0] < w[1])) throw ConfigError(join(path, "window"), "expected [lower, upper] with lower < upper");
    v = v.windowed({w[0], w[1]});
  }
  if (const auto* coef = t.get("coef")) v = v * as_complex(coef, join(path, "coef"));
  return v;
}

ScaleVector parse_vector(const toml::table& t, const std::string& path) {
  const auto* terms = t.get("terms");
  if (!terms) return parse_primitive(t, path);
  reject_unknown(t, path, {"terms"});
  const auto& a = as_array(terms, join(path, "terms"));
  if (a.empty()) throw ConfigError(join(path, "terms"), "empty");
  ScaleVector sum;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto p = join(path, "terms") + "[" + std::to_string(i) + "]";
    sum = sum + parse_primitive(as_table(a.get(i), p), p);
  }
  return sum;
}

void parse_perturbation(const toml::table& t, const std::string& path, ProblemConfig& config) {
  reject_unknown(t, path, {"omega1", "omega2", "alpha", "tau"});
  config.has_perturbation = true;
  config.omega1 = required_string(t, "omega1", path);
  config.omega2 = required_string(t, "omega2", path);
  const auto* alpha = t.get("alpha");
  if (!alpha) throw ConfigError(join(path, "alpha"), "missing");
  if (auto s = alpha->value<std::string>()) {
    if (*s != "zero") throw ConfigError(join(path, "alpha"), "expected {re, im} or \"zero\"");
    config.alpha.reset();
  } else {
    config.alpha = as_complex(alpha, join(path, "alpha"));
  }
  if (const auto* tau = t.get("tau")) {
    if (auto s = tau->value<std::string>()) {
      if (*s != "auto") throw ConfigError(join(path, "tau"), "expected \"auto\" or {re, im}");
    } else {
      config.tau = TauPolicy::fixed(as_complex(tau, join(path, "tau")));
    }
  }
}

SearchRegion region_from_table(const toml::table& t, const std::string& path) {
  reject_unknown(t, path, {"re_min", "re_max", "im_min", "im_max"});
  SearchRegion r{as_number(t.get("re_min"), join(path, "re_min")), as_number(t.get("re_max"), join(path, "re_max")),
                 number_or(t, "im_min", path, 0.0), number_or(t, "im_max", path, 0.0)};
  if (!(r.re_min < r.re_max) || !(r.im_min <= r.im_max)) throw ConfigError(path, "empty region");
  return r;
}

void parse_task(const toml::table& t, const std::string& path, TaskConfig& task) {
  reject_unknown(t, path, {"kind", "z", "region", "seeds", "embedded", "lambda", "mu", "phi", "psi", "tau", "grid",
                           "method", "n", "gap_z", "examples"});
  task.kind = string_or(t, "kind", path, {});
  if (const auto* z = t.get("z")) task.z_points = complex_list(z, join(path, "z"));
  if (const auto* r = t.get("region")) task.region = region_from_table(as_table(r, join(path, "region")), join(path, "region"));
  if (const auto* s = t.get("seeds")) task.seeds = complex_list(s, join(path, "seeds"));
  if (const auto* e = t.get("embedded")) {
    auto b = e->value<bool>();
    if (!b) throw ConfigError(join(path, "embedded"), "expected a boolean");
    task.embedded = *b;
  }
  if (const auto* l = t.get("lambda")) task.lambda = as_complex(l, join(path, "lambda"));
  if (const auto* m = t.get("mu")) task.mu = as_complex(m, join(path, "mu"));
  task.phi = string_or(t, "phi", path, {});
  task.psi = string_or(t, "psi", path, {});
  if (const auto* tau = t.get("tau")) task.tau = as_complex(tau, join(path, "tau"));
  if (const auto* g = t.get("grid")) {
    const auto& gt = as_table(g, join(path, "grid"));
    const auto gp = join(path, "grid");
    reject_unknown(gt, gp, {"start", "stop", "count"});
    const double count = as_number(gt.get("count"), join(gp, "count"));
    if (count < 1 || count != std::floor(count)) throw ConfigError(join(gp, "count"), "expected a positive integer");
    task.grid = EnergyGrid{as_number(gt.get("start"), join(gp, "start")), as_number(gt.get("stop"), join(gp, "stop")),
                           static_cast<int>(count)};
  }
  const auto method = string_or(t, "method", path, "plemelj");
  if (method == "plemelj") task.method = BoundaryMethod::Plemelj;
  else if (method == "eta_extrapolation") task.method = BoundaryMethod::EtaExtrapolation;
  else throw ConfigError(join(path, "method"), "expected plemelj or eta_extrapolation");
  if (const auto* n = t.get("n")) task.n_ladder = number_list(n, join(path, "n"));
  if (const auto* gz = t.get("gap_z")) task.gap_z = as_complex(gz, join(path, "gap_z"));
  if (const auto* ex = t.get("examples")) {
    for (double id : number_list(ex, join(path, "examples"))) {
      if (id != std::floor(id) || id < 1 || id > 6) throw ConfigError(join(path, "examples"), "ids run from 1 to 6");
      task.examples.push_back(static_cast<int>(id));
    }
  }
}

double stod_checked(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(what, "not a number: '" + s + "'");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size()) throw ConfigError(what, "not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(std::string text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

std::vector<double> EnergyGrid::points() const {
  std::vector<double> out;
  if (count == 1) return {start};
  for (int i = 0; i < count; ++i) out.push_back(start + (stop - start) * i / (count - 1));
  return out;
}

const OperatorModel& ProblemConfig::require_operator() const {
  if (!op) throw ConfigError("operator", "missing");
  return *op;
}

const ScaleVector& ProblemConfig::vector(const std::string& name, const std::string& path) const {
  if (name.empty()) throw ConfigError(path, "missing vector name");
  auto it = vectors.find(name);
  if (it == vectors.end()) throw ConfigError(path, "unknown vector '" + name + "'");
  return it->second;
}

PerturbationSpec ProblemConfig::spec() const {
  if (!has_perturbation) throw ConfigError("perturbation", "missing");
  return PerturbationSpec(require_operator(), vector(omega1, "perturbation.omega1"),
                          vector(omega2, "perturbation.omega2"), alpha, tau, options);
}

ProblemConfig parse_config(const std::string& toml_text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(toml_text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream where;
    where << source << ":" << e.source().begin.line << ":" << e.source().begin.column;
    throw ConfigError(where.str(), std::string(e.description()));
  }
  reject_unknown(root, "", {"operator", "vectors", "perturbation", "task"});
  ProblemConfig config;
  if (const auto* op = root.get("operator")) config.op = parse_operator(as_table(op, "operator"), "operator");
  if (const auto* vectors = root.get("vectors")) {
    for (auto&& [name, node] : as_table(vectors, "vectors")) {
      const auto path = "vectors." + std::string(name.str());
      config.vectors.emplace(std::string(name.str()), parse_vector(as_table(&node, path), path));
    }
  }
  if (const auto* p = root.get("perturbation")) parse_perturbation(as_table(p, "perturbation"), "perturbation", config);
  if (const auto* t = root.get("task")) parse_task(as_table(t, "task"), "task", config.task);
  return config;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

SearchRegion parse_region(const std::string& raw) {
  std::string text = raw;
  if (!text.empty() && text.front() == '[' && text.back() == ']') {
    text = text.substr(1, text.size() - 2);
    for (char& c : text)
      if (c == ',') c = ':';
  }
  const auto parts = split(text, ':');
  std::vector<double> v;
  for (const auto& p : parts) v.push_back(stod_checked(p, "--region"));
  SearchRegion r;
  if (v.size() == 2) r = SearchRegion::interval(v[0], v[1]);
  else if (v.size() == 3) r = {v[0], v[1], -std::abs(v[2]), std::abs(v[2])};
  else if (v.size() == 4) r = {v[0], v[1], v[2], v[3]};
  else throw ConfigError("--region", "expected a:b, a:b:h or a:b:c:d");
  if (!(r.re_min < r.re_max) || !(r.im_min <= r.im_max)) throw ConfigError("--region", "empty region");
  return r;
}

EnergyGrid parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError("--grid", "expected a:b:n");
  const double count = stod_checked(parts[2], "--grid");
  if (count < 1 || count != std::floor(count)) throw ConfigError("--grid", "count must be a positive integer");
  return {stod_checked(parts[0], "--grid"), stod_checked(parts[1], "--grid"), static_cast<int>(count)};
}

Complex parse_complex(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return stod_checked(parts[0], "--seed");
  if (parts.size() == 2) return {stod_checked(parts[0], "--seed"), stod_checked(parts[1], "--seed")};
  throw ConfigError("--seed", "expected re,im");
}

void apply_tolerance(ProblemConfig& config, double tol) {
  const QuadratureConfig defaults;
  if (!(tol >= kEpsilonGuard)) throw ConfigError("--tol", "below the 1e-14 guard");
  if (tol > defaults.rel_tol) throw ConfigError("--tol", "may only tighten the default tolerance");
  config.options.quadrature.rel_tol = tol;
  config.options.quadrature.abs_tol = std::min(defaults.abs_tol, tol);
}

}  // namespace perturbkit::cli
