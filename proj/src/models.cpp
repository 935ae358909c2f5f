#include "bplab/models.hpp"

#include <cmath>

#include "bplab/spectral.hpp"

namespace bplab {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::SW: return "SW";
    case ModelKind::BP: return "BP";
    case ModelKind::MBP: return "MBP";
    case ModelKind::Burgers: return "BURGERS";
  }
  return "?";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "SW") return ModelKind::SW;
  if (name == "BP") return ModelKind::BP;
  if (name == "MBP") return ModelKind::MBP;
  if (name == "BURGERS" || name == "Burgers") return ModelKind::Burgers;
  throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(name) + "'");
}

void check_params(const ModelParams& params, WarningLog* log) {
  if (!(params.eps >= 0.0) || !std::isfinite(params.eps)) throw Error(ErrorCode::InvalidArgument, "eps must be >= 0");
  if (!(params.mu >= 0.0) || !std::isfinite(params.mu)) throw Error(ErrorCode::InvalidArgument, "mu must be >= 0");
  if (params.rescaled_time && params.eps == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "rescaled time requires eps > 0");
  }
  const bool dispersive = params.model == ModelKind::BP || params.model == ModelKind::MBP;
  if (dispersive && log && params.eps > kRegimeRatio * params.mu) {
    log->push_back({"regime",
                    "eps exceeds " + std::to_string(kRegimeRatio) + " mu: outside the eps = O(mu) regime",
                    params.mu > 0.0 ? params.eps / params.mu : INFINITY});
  }
}

void axpy(ModelState& state, double a, const StateDerivative& rate) {
  state.surface.axpy(a, rate.surface);
  if (state.velocity && rate.velocity) state.velocity->axpy(a, *rate.velocity);
}

bool is_finite(const ModelState& state) {
  return state.surface.is_finite() && (!state.velocity || state.velocity->is_finite());
}

VecField advection(const VecField& v) {
  VecField out(v.grid());
  for (int b = 0; b < v.dim(); ++b) {
    const VecField g = grad_gamma(v[b]);
    for (int a = 0; a < v.dim(); ++a) out[b] += dealiased_product(v[a], g[a]);
  }
  return out;
}

namespace {

const VecField& require_velocity(const ModelState& state) {
  if (!state.velocity) throw Error(ErrorCode::InvalidArgument, "state has no velocity");
  return *state.velocity;
}

// div((h_b + eps zeta) V): the h_b part by collocation, the quadratic part dealiased.
Field flux_divergence(const Field& zeta, const VecField& v, double eps, const Bathymetry& bath) {
  VecField flux = bath.h_b() * v;
  if (eps != 0.0) {
    for (int a = 0; a < v.dim(); ++a) flux[a].axpy(eps, dealiased_product(zeta, v[a]));
  }
  return div_gamma(flux);
}

Field transport(const VecField& v, const Field& f) {
  const VecField g = grad_gamma(f);
  Field out(f.grid());
  for (int a = 0; a < v.dim(); ++a) out += dealiased_product(v[a], g[a]);
  return out;
}

void check_wet(const Field& zeta, double eps, const Bathymetry& bath) {
  const WaterHeight wh = water_height(zeta, eps, bath);
  if (wh.dry) throw Error(ErrorCode::DryState, "water height reached " + std::to_string(wh.min_h));
}

}  // namespace

StateDerivative rhs_shallow_water(const ModelState& state, const ModelParams& params, const Bathymetry& bath) {
  const VecField& v = require_velocity(state);
  check_wet(state.surface, params.eps, bath);
  StateDerivative out{-flux_divergence(state.surface, v, params.eps, bath), grad_gamma(state.surface)};
  if (params.eps != 0.0) out.velocity->axpy(params.eps, advection(v));
  *out.velocity *= -1.0;
  return out;
}

StateDerivative rhs_boussinesq_peregrine(const ModelState& state, const ModelParams& params,
                                         const Bathymetry& bath, const OperatorHandle& handle) {
  const VecField& v = require_velocity(state);
  check_wet(state.surface, params.eps, bath);
  VecField forcing = grad_gamma(state.surface);
  if (params.eps != 0.0) forcing.axpy(params.eps, advection(v));
  return {-flux_divergence(state.surface, v, params.eps, bath), -solve_I_plus_muTb(forcing, handle)};
}

StateDerivative rhs_modified_bp(const ModelState& state, const ModelParams& params, const Bathymetry& bath,
                                const OperatorHandle& handle) {
  const VecField& v = require_velocity(state);
  const Field& q = state.surface;
  const Field zeta = q_to_zeta(q, params.eps, bath);
  Field dq = bath.inv_h_b() * div_gamma(bath.h_b() * v);
  if (params.eps != 0.0) dq.axpy(params.eps, transport(v, q));
  VecField forcing = apply_weighted(OperatorKind::HbA, grad_gamma(zeta), params.mu, bath);
  if (params.eps != 0.0) forcing.axpy(params.eps, bath.h_b() * advection(v));
  return {-dq, -solve_hbB(forcing, handle)};
}

StateDerivative rhs_burgers(const ModelState& state, const ModelParams& params) {
  if (state.surface.grid().dim() != 1) throw Error(ErrorCode::InvalidArgument, "Burgers is one-dimensional");
  Field du = dealiased_product(state.surface, partial(state.surface, 0));
  du *= -params.eps;
  return {std::move(du), std::nullopt};
}

Model::Model(ModelParams params, Bathymetry bath, SolverOptions options)
    : params_(params), bath_(std::move(bath)) {
  check_params(params_, &warnings_);
  if (params_.model == ModelKind::BP) {
    handle_.emplace(OperatorKind::IPlusMuTb, params_.mu, bath_, options);
  } else if (params_.model == ModelKind::MBP) {
    handle_.emplace(OperatorKind::HbB, params_.mu, bath_, options);
  } else if (params_.model == ModelKind::Burgers && bath_.grid().dim() != 1) {
    throw Error(ErrorCode::InvalidArgument, "Burgers is one-dimensional");
  }
}

StateDerivative Model::rhs(const ModelState& state, double delta) const {
  if (delta < 0.0) throw Error(ErrorCode::InvalidArgument, "delta must be >= 0");
  StateDerivative out = delta == 0.0 ? plain_rhs(state) : mollified_rhs(state, delta);
  if (params_.rescaled_time) {
    const double s = 1.0 / params_.eps;
    out.surface *= s;
    if (out.velocity) *out.velocity *= s;
  }
  return out;
}

StateDerivative Model::plain_rhs(const ModelState& state) const {
  switch (params_.model) {
    case ModelKind::SW: return rhs_shallow_water(state, params_, bath_);
    case ModelKind::BP: return rhs_boussinesq_peregrine(state, params_, bath_, *handle_);
    case ModelKind::MBP: return rhs_modified_bp(state, params_, bath_, *handle_);
    case ModelKind::Burgers: return rhs_burgers(state, params_);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model");
}

// The elliptic solve sits between the two mollifiers, so the forcing is
// rebuilt here rather than wrapping the plain right-hand side.
StateDerivative Model::mollified_rhs(const ModelState& state, double delta) const {
  switch (params_.model) {
    case ModelKind::SW: {
      StateDerivative raw = rhs_shallow_water(state, params_, bath_);
      return {mollify(raw.surface, delta, -2), mollify(*raw.velocity, delta, -2)};
    }
    case ModelKind::Burgers: {
      StateDerivative raw = rhs_burgers(state, params_);
      return {mollify(raw.surface, delta, -2), std::nullopt};
    }
    case ModelKind::BP: {
      const VecField& v = require_velocity(state);
      check_wet(state.surface, params_.eps, bath_);
      VecField forcing = grad_gamma(state.surface);
      if (params_.eps != 0.0) forcing.axpy(params_.eps, advection(v));
      forcing = bath_.h_b() * mollify(forcing, delta, -1);
      return {mollify(-flux_divergence(state.surface, v, params_.eps, bath_), delta, -2),
              mollify(-handle_->solve(forcing), delta, -1)};
    }
    case ModelKind::MBP: {
      const VecField& v = require_velocity(state);
      const Field zeta = q_to_zeta(state.surface, params_.eps, bath_);
      Field dq = bath_.inv_h_b() * div_gamma(bath_.h_b() * v);
      if (params_.eps != 0.0) dq.axpy(params_.eps, transport(v, state.surface));
      VecField forcing = apply_weighted(OperatorKind::HbA, grad_gamma(zeta), params_.mu, bath_);
      if (params_.eps != 0.0) forcing.axpy(params_.eps, bath_.h_b() * advection(v));
      return {mollify(-dq, delta, -2), mollify(-handle_->solve(mollify(forcing, delta, -1)), delta, -1)};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model");
}

Field Model::surface_elevation(const ModelState& state) const {
  if (params_.model == ModelKind::MBP) return q_to_zeta(state.surface, params_.eps, bath_);
  return state.surface;
}

ModelState Model::initial_state(const Field& zeta, std::optional<VecField> velocity, double delta,
                                WarningLog* log) const {
  require_same_grid(zeta.grid(), bath_.grid());
  if (params_.model == ModelKind::Burgers) return {zeta, std::nullopt, 0.0};
  VecField v = velocity ? std::move(*velocity) : VecField(zeta.grid());
  switch (params_.model) {
    case ModelKind::MBP:
      return {zeta_to_q(zeta, params_.eps, bath_, log), std::move(v), 0.0};
    case ModelKind::BP:
      if (delta > 0.0) return {mollify(zeta, delta, -1), mollify(v, delta, -1), 0.0};
      return {zeta, std::move(v), 0.0};
    default:
      return {zeta, std::move(v), 0.0};
  }
}

}  // namespace bplab
