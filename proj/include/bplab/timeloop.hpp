#pragma once

// Explicit Runge-Kutta integration with CFL control and blow-up monitoring.

#include <string>
#include <string_view>
#include <vector>

#include "bplab/diagnostics.hpp"

namespace bplab {

enum class Scheme { RK4, RK2 };

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

struct StepperConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::RK4;
  double delta = 0.0;
  double t_end = 1.0;
  int output_stride = 1;
  double blowup_threshold = 1e3;
};

enum class TerminationReason { Completed, Blowup, Dry, SolverFailure };

std::string_view to_string(TerminationReason reason);

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  std::vector<std::array<int, 2>> modes;
  ModelState final_state;
  TerminationReason reason = TerminationReason::Completed;
  std::string message;
  long steps = 0;
  /// Largest W^{1,inf} value seen at each step, with its time (blow-up tracking).
  std::vector<std::pair<double, double>> gradient_history;
  WarningLog warnings;
};

/// Largest linear frequency the model can excite on the grid at this state,
/// including the advective contribution eps sup|V| k_max.
double max_frequency(const Model& model, const ModelState& state);

/// Stability bound of the scheme along the imaginary axis, with a safety margin.
double cfl_limit(Scheme scheme);

/// Throws CflViolation when dt * max_frequency exceeds cfl_limit.
void check_cfl(const Model& model, const ModelState& state, const StepperConfig& config);

ModelState step(const ModelState& state, const Model& model, const StepperConfig& config);

struct RunOptions {
  DiagnosticsOptions diagnostics;
  bool track_gradient = false;
};

/// Integrates to t_end or until the W^{1,inf} norm crosses blowup_threshold,
/// recording diagnostics every output_stride steps and at the end. Model
/// failures become termination reasons; only a CFL violation at setup throws.
Trajectory run(const ModelState& initial, const Model& model, const StepperConfig& config,
               const RunOptions& options = {});

}  // namespace bplab
