#pragma once

// Experiment drivers behind `bplab run`. Each scenario fans independent runs
// out to a bounded worker pool, collects the results in a fixed order, writes
// CSV/JSON artifacts and returns pass/fail verdicts.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bplab/config.hpp"

namespace bplab {

struct ScenarioInfo {
  std::string_view name;
  std::string_view description;
};

const std::vector<ScenarioInfo>& scenario_catalog();

struct Verdict {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string comparison;  // "<=", ">=", "<", ">", "in"
  bool pass = false;
  std::string note;
};

struct RunContext {
  std::filesystem::path output_dir;
  int jobs = 1;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  bool write_files = true;
};

struct ScenarioResult {
  std::string scenario;
  std::vector<Verdict> verdicts;
  /// Everything written to summary.json; timing lives under "timing" only.
  nlohmann::json summary;
  bool passed = false;
  double runtime_s = 0.0;
};

/// Output directory: explicit --out, else the config's "output", else
/// $BPLAB_OUT_ROOT/<scenario>, else out/<scenario>.
std::filesystem::path resolve_output_dir(const ExperimentConfig& config, const std::optional<std::filesystem::path>& cli_out);

ScenarioResult run_scenario(const ExperimentConfig& config, const RunContext& context);

/// Runs task(i) for i in [0, count) on up to `jobs` threads; rethrows the first failure.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task);

/// Summary with the "timing" member removed, for reproducibility comparisons.
nlohmann::json strip_timing(nlohmann::json summary);

}  // namespace bplab
