#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status = -1;
  std::string output;
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(BPLAB_CLI_PATH) + " " + args + " 2>&1";
  Outcome out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) out.output += buf.data();
  const int raw = pclose(pipe);
  out.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

std::string config(const std::string& name) { return std::string(BPLAB_CONFIG_DIR) + "/" + name; }

TEST(Cli, ListScenarios) {
  const Outcome o = run_cli("list-scenarios");
  EXPECT_EQ(o.status, 0);
  for (const char* n : {"dispersion", "consistency", "longtime", "burgers", "operator-audit", "mollifier-study"})
    EXPECT_NE(o.output.find(n), std::string::npos) << n;
}

TEST(Cli, ValidateAcceptsShippedAndRejectsBrokenConfigs) {
  EXPECT_EQ(run_cli("validate --config " + config("burgers.json")).status, 0);
  const fs::path bad = fs::temp_directory_path() / "bplab_cli_bad.json";
  std::ofstream(bad) << R"({"scenario": "burgers", "grid": {"dim": 1, "n": 0, "length": "2pi"}})";
  const Outcome o = run_cli("validate --config " + bad.string());
  EXPECT_EQ(o.status, 2);
  EXPECT_NE(o.output.find("$.grid.n"), std::string::npos);
  EXPECT_EQ(run_cli("run").status, 2);
  EXPECT_EQ(run_cli("frobnicate").status, 2);
}

TEST(Cli, RunPrintsVerdictsAndExitStatusFollowsThem) {
  const fs::path out = fs::temp_directory_path() / "bplab_cli_run";
  fs::remove_all(out);
  Outcome o = run_cli("run --config " + config("burgers.json") + " --out " + out.string() + " --jobs 2");
  EXPECT_EQ(o.status, 0) << o.output;
  EXPECT_NE(o.output.find("PASS"), std::string::npos);
  EXPECT_EQ(o.output.find("FAIL"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "summary.json"));

  // An unattainable threshold must flip the exit status.
  const fs::path strict = fs::temp_directory_path() / "bplab_cli_strict.json";
  std::ifstream in(config("burgers.json"));
  auto doc = nlohmann::json::parse(in);
  doc["thresholds"]["shock_time_rel_err"] = 1e-12;
  std::ofstream(strict) << doc.dump();
  o = run_cli("run --config " + strict.string() + " --out " + (out / "strict").string());
  EXPECT_EQ(o.status, 1) << o.output;
  EXPECT_NE(o.output.find("FAIL"), std::string::npos);
}

}  // namespace
