#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "config.hpp"
#include "report.hpp"
#include "tasks.hpp"

using namespace perturbkit;
using namespace perturbkit::cli;

namespace {

const char* kPointInteraction = R"(
[operator]
backend = "laplace_line"

[vectors.d]
kind = "delta"
point = 0.0

[perturbation]
omega1 = "d"
omega2 = "d"
alpha = { re = -1.0, im = 0.0 }
)";

std::string error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

}  // namespace

TEST(Config, ParsesVectorsAndPerturbation) {
  const auto config = parse_config(R"(
[operator]
backend = "multiplication"
power = 2.0
start = 1.0

[vectors.w]
terms = [
  { kind = "power_law", exponent = -1.5, zeros = [2.0], coef = { re = 0.5, im = 1.0 } },
  { kind = "power_law", exponent = -2.0, window = [1.0, 4.0] },
]

[perturbation]
omega1 = "w"
omega2 = "w"
alpha = "zero"
tau = { re = 0.25, im = 0.0 }
)");
  EXPECT_EQ(config.vectors.at("w").terms().size(), 2u);
  EXPECT_FALSE(config.alpha.has_value());
  EXPECT_EQ(config.tau.kind, TauPolicy::Kind::Explicit);
  EXPECT_TRUE(config.spec().alpha_is_zero());
}

TEST(Config, ReportsFieldPaths) {
  EXPECT_EQ(error_path("[operator]\nbackend = \"hyperbolic\"\n"), "operator.backend");
  EXPECT_EQ(error_path("[vectors.a]\nkind = \"power_law\"\n"), "vectors.a.exponent");
  EXPECT_EQ(error_path("[vectors.a]\nkind = \"power_law\"\nexponent = 1\ncolour = 3\n"), "vectors.a.colour");
  EXPECT_EQ(error_path("[task]\nregion = { re_min = 2.0, re_max = 1.0 }\n"), "task.region");
  EXPECT_EQ(error_path("[perturbation]\nomega1 = \"a\"\nomega2 = \"a\"\nalpha = \"one\"\n"), "perturbation.alpha");
  EXPECT_NE(error_path("[operator\n").find("config:1"), std::string::npos);
}

TEST(Config, UnknownVectorNameIsRejected) {
  auto config = parse_config(kPointInteraction);
  config.omega2 = "missing";
  try {
    config.spec();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "perturbation.omega2");
  }
}

TEST(Flags, RegionGridSeed) {
  const auto r = parse_region("[-2,-0.01]");
  EXPECT_TRUE(r.is_real());
  EXPECT_EQ(r.re_min, -2.0);
  EXPECT_EQ(r.re_max, -0.01);
  const auto s = parse_region("-2:-1:0.5");
  EXPECT_EQ(s.im_min, -0.5);
  EXPECT_EQ(s.im_max, 0.5);
  EXPECT_EQ(parse_region("0:1:2:3").im_min, 2.0);
  EXPECT_THROW(parse_region("1:0"), ConfigError);
  EXPECT_THROW(parse_region("a:b"), ConfigError);

  const auto g = parse_grid("1:100:50");
  EXPECT_EQ(g.points().size(), 50u);
  EXPECT_EQ(g.points().front(), 1.0);
  EXPECT_EQ(g.points().back(), 100.0);
  EXPECT_THROW(parse_grid("1:100:0"), ConfigError);

  EXPECT_EQ(parse_complex("1.5,-2"), Complex(1.5, -2.0));
  EXPECT_EQ(parse_complex("3"), Complex(3.0, 0.0));
}

TEST(Flags, ToleranceOnlyTightens) {
  auto config = parse_config(kPointInteraction);
  apply_tolerance(config, 1e-12);
  EXPECT_EQ(config.options.quadrature.rel_tol, 1e-12);
  EXPECT_THROW(apply_tolerance(config, 1e-3), ConfigError);
  EXPECT_THROW(apply_tolerance(config, 1e-16), ConfigError);
}

TEST(Json, FixedFormatting) {
  Json j;
  j["b"] = 0.1;
  j["a"] = complex_json(Complex(1.0 / 3.0, INFINITY));
  EXPECT_EQ(dump_json(j), "{\n  \"b\": 0.10000000000000001,\n  \"a\": {\n    \"re\": 0.33333333333333331,\n"
                          "    \"im\": \"inf\"\n  }\n}\n");
  EXPECT_EQ(complex_from_json(complex_json(Complex(0.25, -INFINITY))), Complex(0.25, -INFINITY));
}

TEST(Csv, QuotesSpecialCells) {
  Table t{{"a", "b"}, {{"1", "x,y"}, {"2", "say \"hi\""}}};
  EXPECT_EQ(render_csv(t), "a,b\n1,\"x,y\"\n2,\"say \"\"hi\"\"\"\n");
}

TEST(Tasks, EigenReportIsDeterministicAndChecks) {
  Invocation inv;
  inv.command = "eigen";
  inv.config_text = kPointInteraction;
  inv.region = "-2:-0.01";
  const auto first = run_task(inv);
  const auto second = run_task(inv);
  EXPECT_EQ(dump_json(make_report(inv, &first)), dump_json(make_report(inv, &second)));
  ASSERT_EQ(first.payload.at("eigenvalues").size(), 1u);
  EXPECT_NEAR(real_from_json(first.payload["eigenvalues"][0]["lambda"]["re"]), -0.25, 1e-12);

  const auto report = Json::parse(dump_json(make_report(inv, &first)));
  EXPECT_TRUE(check_report(report).consistent);

  auto tampered = report;
  tampered["result"]["eigenvalues"][0]["lambda"]["re"] = -0.3;
  EXPECT_FALSE(check_report(tampered).consistent);
}

TEST(Tasks, CommandMustMatchConfigTask) {
  Invocation inv;
  inv.command = "scatter";
  inv.config_text = std::string(kPointInteraction) + "\n[task]\nkind = \"eigen\"\n";
  EXPECT_THROW(run_task(inv), ConfigError);
}

TEST(Tasks, ScatterUnitarityColumn) {
  Invocation inv;
  inv.command = "scatter";
  inv.config_text = kPointInteraction;
  inv.grid = "1:100:50";
  const auto result = run_task(inv);
  ASSERT_EQ(result.table.rows.size(), 50u);
  for (const auto& row : result.table.rows) EXPECT_NEAR(std::stod(row[3]), 1.0, 1e-12);
}

TEST(Files, AtomicWriteReplaces) {
  const auto dir = std::filesystem::temp_directory_path() / "perturbkit_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "report.json").string();
  write_atomic(path, "first");
  write_atomic(path, "second");
  EXPECT_EQ(std::filesystem::file_size(path), 6u);
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove_all(dir);
}
