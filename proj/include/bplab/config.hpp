#pragma once

// Experiment configuration: one JSON document per experiment.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bplab/bathymetry.hpp"
#include "bplab/models.hpp"
#include "bplab/timeloop.hpp"

namespace bplab {

enum class InitialShape {
  Gaussian,             // zeta = A exp(-|x - c|^2 / w^2), V = 0
  GaussianRightMoving,  // same zeta, V = (zeta, 0): the right-going flat-bottom linear wave
  Modes,                // zeta = A sum cos(k . x), V = 0
  BurgersSine,          // u = -A sin(2 pi x / L)
};

struct InitialCondition {
  InitialShape shape = InitialShape::Gaussian;
  double amplitude = 1.0;
  std::array<double, 2> center{0.0, 0.0};
  double width = 1.0;
  std::vector<std::array<int, 2>> modes;
  /// Center the Gaussian in the domain unless `center` was given explicitly.
  bool centered = true;
};

struct SweepAxes {
  std::vector<double> eps;
  std::vector<double> mu;
  std::vector<double> delta;
  /// Contrast values run and recorded but never asserted (longtime).
  std::vector<double> contrast_eps;
  bool eps_equals_mu = false;
};

struct AuditGrid {
  GridSpec grid;
};

struct ExperimentConfig {
  std::string scenario;
  GridSpec grid;
  ModelParams params;
  double beta = 0.0;
  BottomProfile bottom = profile::Flat{};
  InitialCondition initial;
  StepperConfig stepper;
  SweepAxes sweep;
  std::map<std::string, double> thresholds;
  std::optional<std::filesystem::path> output_dir;
  std::uint64_t seed = 1;
  int energy_order = 3;
  double theorem_order = 2.0;
  bool snapshots = false;
  /// Scenario-specific extras: "periods" (dispersion), "horizon" (longtime),
  /// "trials" (operator-audit), ...
  std::map<std::string, double> extras;
  std::vector<GridSpec> audit_grids;
  /// The document as read, echoed into the summary.
  nlohmann::json source;

  double threshold(const std::string& name) const;
  double extra(const std::string& name, double fallback) const;
};

/// Lengths accept numbers or strings such as "2pi", "20pi", "pi/2", "6.5".
double parse_length(const nlohmann::json& value, const std::string& path);

/// Parses and validates; errors are ConfigError with the JSON path and reason.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Shipped default verdict thresholds for a scenario.
std::map<std::string, double> default_thresholds(const std::string& scenario);

Field initial_surface(const InitialCondition& ic, const Grid& grid);
std::optional<VecField> initial_velocity(const InitialCondition& ic, const Grid& grid);

}  // namespace bplab
