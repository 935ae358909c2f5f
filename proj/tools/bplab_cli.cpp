// Command-line front end: run, list-scenarios, validate.

#include <cstdio>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "bplab/config.hpp"
#include "bplab/errors.hpp"
#include "bplab/scenarios.hpp"

namespace {

int run_command(const std::string& config_path, const std::optional<std::string>& out, int jobs,
                std::optional<std::uint64_t> seed) {
  const bplab::ExperimentConfig cfg = bplab::load_config(config_path);
  bplab::RunContext ctx;
  ctx.output_dir = bplab::resolve_output_dir(cfg, out ? std::optional<std::filesystem::path>(*out) : std::nullopt);
  ctx.jobs = jobs;
  ctx.seed = seed;
  const bplab::ScenarioResult result = bplab::run_scenario(cfg, ctx);
  for (const auto& v : result.verdicts) {
    std::printf("%-4s %-48s value=%-12.6g %s %g%s%s\n", v.pass ? "PASS" : "FAIL", v.name.c_str(), v.value,
                v.comparison.c_str(), v.threshold, v.note.empty() ? "" : "  ", v.note.c_str());
  }
  std::printf("%s: %s in %.2f s, artifacts in %s\n", result.scenario.c_str(), result.passed ? "passed" : "FAILED",
              result.runtime_s, ctx.output_dir.string().c_str());
  return result.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bplab: Boussinesq-Peregrine numerical laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "output directory (default: $BPLAB_OUT_ROOT/<scenario>)");
  run->add_option("--jobs", jobs, "worker threads for independent runs")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "seed for randomized checks (overrides the config)");

  auto* list = app.add_subcommand("list-scenarios", "print the known scenarios");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "parse and check a config without running it");
  validate->add_option("--config", validate_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*run) return run_command(config_path, out, jobs, seed);
    if (*list) {
      for (const auto& s : bplab::scenario_catalog()) std::printf("%-16s %s\n", s.name.data(), s.description.data());
      return 0;
    }
    if (*validate) {
      const bplab::ExperimentConfig cfg = bplab::load_config(validate_path);
      std::printf("%s: ok (scenario %s)\n", validate_path.c_str(), cfg.scenario.c_str());
      return 0;
    }
  } catch (const bplab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
