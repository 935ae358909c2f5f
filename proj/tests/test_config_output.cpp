#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bplab/config.hpp"
#include "bplab/errors.hpp"
#include "bplab/output.hpp"
#include "bplab/scenarios.hpp"

namespace {

using namespace bplab;
using nlohmann::json;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bplab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json minimal() {
  return json::parse(R"({
    "scenario": "dispersion",
    "grid": {"dim": 1, "n": 64, "length": "2pi"},
    "model": {"kind": "BP", "eps": 0.0, "mu": 0.1},
    "sweep": {"mu": [0.1]},
    "initial": {"shape": "modes", "amplitude": 1e-3, "modes": [1]}
  })");
}

std::string config_error(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    return e.what();
  }
  ADD_FAILURE() << "expected ConfigError";
  return {};
}

TEST(Config, Lengths) {
  EXPECT_DOUBLE_EQ(parse_length(json("2pi"), "$"), 2 * pi);
  EXPECT_DOUBLE_EQ(parse_length(json("20pi"), "$"), 20 * pi);
  EXPECT_DOUBLE_EQ(parse_length(json("pi/2"), "$"), pi / 2);
  EXPECT_DOUBLE_EQ(parse_length(json("pi"), "$"), pi);
  EXPECT_DOUBLE_EQ(parse_length(json("6.5"), "$"), 6.5);
  EXPECT_DOUBLE_EQ(parse_length(json(3.0), "$"), 3.0);
  EXPECT_THROW(parse_length(json("two pi"), "$"), Error);
  EXPECT_THROW(parse_length(json(true), "$"), Error);
}

TEST(Config, MinimalDocumentGetsDefaults) {
  const ExperimentConfig c = parse_config(minimal());
  EXPECT_EQ(c.scenario, "dispersion");
  EXPECT_EQ(c.grid.n[0], 64);
  EXPECT_DOUBLE_EQ(c.grid.length[0], 2 * pi);
  EXPECT_EQ(c.params.model, ModelKind::BP);
  EXPECT_DOUBLE_EQ(c.params.mu, 0.1);
  EXPECT_DOUBLE_EQ(c.threshold("rel_err"), default_thresholds("dispersion").at("rel_err"));
  EXPECT_THROW(c.threshold("nonexistent"), Error);
  EXPECT_DOUBLE_EQ(c.extra("periods", 7.0), 7.0);
  EXPECT_EQ(c.source, minimal());
}

TEST(Config, ErrorsNameTheOffendingPath) {
  json d = minimal();
  d["grid"]["n"] = -4;
  EXPECT_NE(config_error(d).find("$.grid.n"), std::string::npos);
  d = minimal();
  d["stepper"] = {{"dt", 1e-3}, {"sheme", "RK4"}};
  EXPECT_NE(config_error(d).find("$.stepper.sheme"), std::string::npos);
  d = minimal();
  d["model"]["kind"] = "KdV";
  EXPECT_NE(config_error(d).find("$.model.kind"), std::string::npos);
  d = minimal();
  d.erase("scenario");
  EXPECT_NE(config_error(d).find("$.scenario"), std::string::npos);
  d = minimal();
  d["scenario"] = "teleport";
  EXPECT_NE(config_error(d).find("$.scenario"), std::string::npos);
  d = minimal();
  d["thresholds"] = {{"rel_err", "small"}};
  EXPECT_NE(config_error(d).find("$.thresholds.rel_err"), std::string::npos);
}

TEST(Config, ShippedConfigsParse) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(BPLAB_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const ExperimentConfig c = load_config(entry.path());
    EXPECT_FALSE(c.scenario.empty()) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 6);
}

TEST(Config, LoadReportsMissingFilesAndBadJson) {
  const fs::path dir = scratch_dir("config");
  EXPECT_THROW(load_config(dir / "missing.json"), Error);
  std::ofstream(dir / "bad.json") << "{ not json";
  try {
    load_config(dir / "bad.json");
    FAIL() << "expected ConfigError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    EXPECT_NE(std::string(e.what()).find("bad.json"), std::string::npos);
  }
}

TEST(Config, InitialConditions) {
  const Grid g(GridSpec{1, {64, 1}, {20.0, 1.0}, 1.0});
  InitialCondition ic;
  ic.amplitude = 0.5;
  ic.width = 2.0;
  const Field z = initial_surface(ic, g);
  EXPECT_NEAR(z.max(), 0.5, 1e-12);
  EXPECT_NEAR(z[32], 0.5, 1e-12);  // centered at L/2
  EXPECT_FALSE(initial_velocity(ic, g).has_value() && initial_velocity(ic, g)->max_abs() > 0);
  ic.shape = InitialShape::GaussianRightMoving;
  EXPECT_LT(((*initial_velocity(ic, g))[0] - z).max_abs(), 1e-15);
  ic.shape = InitialShape::BurgersSine;
  ic.amplitude = 1.0;
  const Field u = initial_surface(ic, g);
  EXPECT_NEAR(u[16], -1.0, 1e-12);  // -sin(2 pi x / L) at x = L/4
}

TEST(Output, DiagnosticsCsvHeaderAndRows) {
  const fs::path dir = scratch_dir("csv");
  const std::vector<std::array<int, 2>> modes{{{1, 0}}, {{2, 3}}};
  const auto cols = diagnostics_columns(modes);
  const std::vector<std::string> expect{"t", "EN", "E_bp", "E_thm", "sup_U", "sup_gradU", "mode_1_0", "mode_2_3"};
  EXPECT_EQ(cols, expect);
  write_diagnostics_csv(dir / "empty.csv", {}, modes);
  EXPECT_EQ(read_text(dir / "empty.csv"), "t,EN,E_bp,E_thm,sup_U,sup_gradU,mode_1_0,mode_2_3\n");
  DiagnosticsRecord r;
  r.time = 0.1;
  r.EN = 1.0 / 3.0;
  r.modes = {0.25, -1.0};
  write_diagnostics_csv(dir / "one.csv", {r}, modes);
  const std::string text = read_text(dir / "one.csv");
  EXPECT_NE(text.find("0.33333333333333331"), std::string::npos);  // round-trippable precision
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_THROW(write_table_csv("/dev/null/x.csv", {"a"}, {}), Error);
  EXPECT_THROW(write_table_csv(dir / "w.csv", {"a", "b"}, {{1.0}}), Error);
}

TEST(Output, SnapshotRoundTrip) {
  const fs::path dir = scratch_dir("snap");
  const Grid g(GridSpec{2, {8, 8}, {1.0, 1.0}, 1.0});
  const Field a = Field::sample(g, [](double x, double y) { return x + 10 * y; });
  const Field b(g, -2.0);
  write_snapshot(dir / "s", {&a, &b}, {"zeta", "V_x"}, 1.25);
  EXPECT_EQ(fs::file_size(dir / "s.bin"), 8u * 64u * 2u);
  const Snapshot s = read_snapshot(dir / "s");
  ASSERT_EQ(s.values.size(), 128u);
  for (std::size_t i = 0; i < 64; ++i) {
    EXPECT_EQ(s.values[i], a[i]);
    EXPECT_EQ(s.values[64 + i], -2.0);
  }
  EXPECT_DOUBLE_EQ(s.sidecar.at("time").get<double>(), 1.25);
  EXPECT_EQ(s.sidecar.at("bytes").get<std::size_t>(), 1024u);
  EXPECT_THROW(read_snapshot(dir / "missing"), Error);
}

TEST(Scenarios, CatalogAndOutputResolution) {
  std::vector<std::string> names;
  for (const auto& s : scenario_catalog()) names.emplace_back(s.name);
  for (const char* n : {"dispersion", "consistency", "longtime", "burgers", "operator-audit", "mollifier-study"})
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  ExperimentConfig c = parse_config(minimal());
  EXPECT_EQ(resolve_output_dir(c, fs::path("x")), fs::path("x"));
  c.output_dir = fs::path("from_config");
  EXPECT_EQ(resolve_output_dir(c, std::nullopt), fs::path("from_config"));
}

TEST(Scenarios, ParallelForCoversEveryIndexAndRethrows) {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 100);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 7) throw Error(ErrorCode::InvalidArgument, "boom");
               }),
               Error);
}

TEST(Scenarios, SummariesAreReproducibleAcrossJobCounts) {
  const ExperimentConfig c = load_config(fs::path(BPLAB_CONFIG_DIR) / "consistency.json");
  RunContext one{scratch_dir("det1"), 1, std::nullopt, true};
  RunContext two{scratch_dir("det2"), 3, std::nullopt, true};
  const ScenarioResult a = run_scenario(c, one);
  const ScenarioResult b = run_scenario(c, two);
  EXPECT_TRUE(a.summary.contains("timing"));
  EXPECT_EQ(strip_timing(a.summary).dump(), strip_timing(b.summary).dump());
  EXPECT_FALSE(strip_timing(a.summary).contains("timing"));
  EXPECT_EQ(read_text(one.output_dir / "consistency.csv"), read_text(two.output_dir / "consistency.csv"));
  const json back = json::parse(read_text(one.output_dir / "summary.json"));
  EXPECT_EQ(strip_timing(back).dump(), strip_timing(a.summary).dump());
}

}  // namespace
