#include "bplab/timeloop.hpp"

#include <algorithm>
#include <cmath>

namespace bplab {

std::string_view to_string(Scheme scheme) { return scheme == Scheme::RK4 ? "RK4" : "RK2"; }

Scheme scheme_from_string(std::string_view name) {
  if (name == "RK4") return Scheme::RK4;
  if (name == "RK2") return Scheme::RK2;
  throw Error(ErrorCode::InvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::Completed: return "completed";
    case TerminationReason::Blowup: return "blowup";
    case TerminationReason::Dry: return "dry";
    case TerminationReason::SolverFailure: return "solver_failure";
  }
  return "?";
}

double max_frequency(const Model& model, const ModelState& state) {
  const Grid& g = model.grid();
  const auto lap = g.laplacian_symbol();
  const double k2 = *std::max_element(lap.begin(), lap.end());
  const double k = std::sqrt(k2);
  const ModelParams& p = model.params();
  const Bathymetry& bath = model.bathymetry();
  const double hmax = bath.h_max(), hmin = bath.h_min();
  double linear = 0.0;
  switch (p.model) {
    case ModelKind::SW: linear = std::sqrt(hmax) * k; break;
    case ModelKind::BP: linear = std::sqrt(hmax * k2 / (1.0 + p.mu * hmin * hmin * k2 / 3.0)); break;
    case ModelKind::MBP:
      linear = std::sqrt(hmax * k2 * (1.0 + p.mu * k2) / (1.0 + p.mu * k2 * (1.0 + hmin * hmin / 3.0)));
      break;
    case ModelKind::Burgers: break;
  }
  double speed = 0.0;
  if (state.velocity) {
    speed = state.velocity->max_abs();
  } else if (p.model == ModelKind::Burgers) {
    speed = state.surface.max_abs();
  }
  double omega = linear + p.eps * speed * k;
  if (p.rescaled_time) omega /= p.eps;
  return omega;
}

double cfl_limit(Scheme scheme) { return scheme == Scheme::RK4 ? 2.5 : 1.0; }

void check_cfl(const Model& model, const ModelState& state, const StepperConfig& config) {
  if (!(config.dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  const double number = config.dt * max_frequency(model, state);
  if (number > cfl_limit(config.scheme)) {
    throw Error(ErrorCode::CflViolation, "dt * omega_max = " + std::to_string(number) + " exceeds " +
                                             std::to_string(cfl_limit(config.scheme)));
  }
}

namespace {

ModelState advance(const ModelState& state, const Model& model, double dt, Scheme scheme, double delta) {
  ModelState out = state;
  if (scheme == Scheme::RK2) {
    const StateDerivative k1 = model.rhs(state, delta);
    ModelState mid = state;
    axpy(mid, 0.5 * dt, k1);
    axpy(out, dt, model.rhs(mid, delta));
  } else {
    const StateDerivative k1 = model.rhs(state, delta);
    ModelState tmp = state;
    axpy(tmp, 0.5 * dt, k1);
    const StateDerivative k2 = model.rhs(tmp, delta);
    tmp = state;
    axpy(tmp, 0.5 * dt, k2);
    const StateDerivative k3 = model.rhs(tmp, delta);
    tmp = state;
    axpy(tmp, dt, k3);
    const StateDerivative k4 = model.rhs(tmp, delta);
    axpy(out, dt / 6.0, k1);
    axpy(out, dt / 3.0, k2);
    axpy(out, dt / 3.0, k3);
    axpy(out, dt / 6.0, k4);
  }
  out.time = state.time + dt;
  return out;
}

}  // namespace

ModelState step(const ModelState& state, const Model& model, const StepperConfig& config) {
  return advance(state, model, config.dt, config.scheme, config.delta);
}

Trajectory run(const ModelState& initial, const Model& model, const StepperConfig& config, const RunOptions& options) {
  if (config.output_stride < 1) throw Error(ErrorCode::InvalidArgument, "output_stride must be >= 1");
  if (!(config.t_end >= initial.time)) throw Error(ErrorCode::InvalidArgument, "t_end precedes the initial time");
  check_cfl(model, initial, config);

  Trajectory traj{{}, options.diagnostics.modes, initial, TerminationReason::Completed, {}, 0, {}, model.warnings()};
  ModelState state = initial;
  traj.records.push_back(compute_record(state, model, options.diagnostics));
  if (options.track_gradient) traj.gradient_history.emplace_back(state.time, w1inf_norms(state).second);

  const double t0 = initial.time;
  const auto n_steps = static_cast<long>(std::ceil((config.t_end - t0) / config.dt - 1e-9));
  bool recorded = true;
  for (long i = 0; i < n_steps; ++i) {
    const double t_next = std::min(t0 + static_cast<double>(i + 1) * config.dt, config.t_end);
    try {
      ModelState next = advance(state, model, t_next - state.time, config.scheme, config.delta);
      next.time = t_next;
      state = std::move(next);
    } catch (const Error& e) {
      traj.message = e.what();
      traj.reason = e.code() == ErrorCode::DryState || e.code() == ErrorCode::LogDomain
                        ? TerminationReason::Dry
                        : TerminationReason::SolverFailure;
      break;
    }
    ++traj.steps;
    recorded = false;
    if (!is_finite(state)) {
      traj.reason = TerminationReason::Blowup;
      traj.message = "non-finite state at t = " + std::to_string(state.time);
      break;
    }
    const auto [sup, grad] = w1inf_norms(state);
    if (options.track_gradient) traj.gradient_history.emplace_back(state.time, grad);
    if (std::max(sup, grad) > config.blowup_threshold) {
      traj.reason = TerminationReason::Blowup;
      traj.message = "W^{1,inf} norm " + std::to_string(std::max(sup, grad)) + " exceeded threshold at t = " +
                     std::to_string(state.time);
      break;
    }
    if ((i + 1) % config.output_stride == 0) {
      traj.records.push_back(compute_record(state, model, options.diagnostics));
      recorded = true;
    }
  }
  if (!recorded && is_finite(state)) {
    try {
      traj.records.push_back(compute_record(state, model, options.diagnostics));
    } catch (const Error&) {
      // diagnostics of a failing state are best effort
    }
  }
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace bplab
