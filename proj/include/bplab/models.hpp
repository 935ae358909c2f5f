#pragma once

// Right-hand sides of the evolution systems, written as dU/dt = F(U):
//   SW      shallow water in (zeta, V)
//   BP      Boussinesq-Peregrine in (zeta, V)
//   MBP     modified Boussinesq-Peregrine in (q, V)
//   BURGERS 1D Burgers in u

#include <optional>
#include <string_view>
#include <vector>

#include "bplab/errors.hpp"
#include "bplab/operators.hpp"

namespace bplab {

enum class ModelKind { SW, BP, MBP, Burgers };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

struct ModelParams {
  double eps = 0.0;
  double mu = 0.0;
  ModelKind model = ModelKind::BP;
  /// Evolve in t' = eps*t (MBP): every term of the right-hand side is divided by eps.
  bool rescaled_time = false;
};

/// Ratio eps/mu above which BP and MBP runs are flagged as outside their regime.
inline constexpr double kRegimeRatio = 10.0;

/// Throws InvalidArgument on bad parameters; appends a warning when eps > 10 mu for BP/MBP.
void check_params(const ModelParams& params, WarningLog* log = nullptr);

/// Prognostic unknowns: zeta (SW, BP), q (MBP) or u (Burgers), plus the
/// depth-averaged velocity when the model has one.
struct ModelState {
  Field surface;
  std::optional<VecField> velocity;
  double time = 0.0;
};

struct StateDerivative {
  Field surface;
  std::optional<VecField> velocity;
};

/// state += a * rate (time untouched).
void axpy(ModelState& state, double a, const StateDerivative& rate);
bool is_finite(const ModelState& state);

StateDerivative rhs_shallow_water(const ModelState& state, const ModelParams& params, const Bathymetry& bath);
/// `handle` must be the I + mu T_b handle built on `bath` with `params.mu`.
StateDerivative rhs_boussinesq_peregrine(const ModelState& state, const ModelParams& params,
                                         const Bathymetry& bath, const OperatorHandle& handle);
/// `handle` must be the h_b B handle built on `bath` with `params.mu`.
StateDerivative rhs_modified_bp(const ModelState& state, const ModelParams& params, const Bathymetry& bath,
                                const OperatorHandle& handle);
StateDerivative rhs_burgers(const ModelState& state, const ModelParams& params);

/// (V . grad) V with dealiased products.
VecField advection(const VecField& v);

/// Parameters, bathymetry and the prefactorized handle the model needs.
/// Immutable after construction; one instance can drive many concurrent runs.
class Model {
 public:
  Model(ModelParams params, Bathymetry bath, SolverOptions options = {});

  const ModelParams& params() const noexcept { return params_; }
  const Bathymetry& bathymetry() const noexcept { return bath_; }
  const Grid& grid() const noexcept { return bath_.grid(); }
  /// I + mu T_b for BP, h_b B for MBP; absent otherwise.
  const std::optional<OperatorHandle>& handle() const noexcept { return handle_; }
  const WarningLog& warnings() const noexcept { return warnings_; }

  /// F(U). With delta > 0 the mollified system is evaluated instead: the
  /// forcing of V is wrapped as (1 - delta Lap)^-1 M^-1 (1 - delta Lap)^-1
  /// and the surface equation (and SW/Burgers) by (1 - delta Lap)^-2.
  StateDerivative rhs(const ModelState& state, double delta = 0.0) const;

  /// zeta from the prognostic surface variable (identity except for MBP).
  Field surface_elevation(const ModelState& state) const;

  /// Builds the prognostic state from (zeta, V): converts zeta to q for MBP,
  /// and for BP with delta > 0 mollifies the data once, (1 - delta Lap)^-1 U0.
  ModelState initial_state(const Field& zeta, std::optional<VecField> velocity, double delta = 0.0,
                           WarningLog* log = nullptr) const;

 private:
  StateDerivative plain_rhs(const ModelState& state) const;
  StateDerivative mollified_rhs(const ModelState& state, double delta) const;

  ModelParams params_;
  Bathymetry bath_;
  std::optional<OperatorHandle> handle_;
  WarningLog warnings_;
};

/// u_k = (eps d/dt)^k u for the MBP system, 0 <= k <= k_max <= 3, obtained by
/// propagating Taylor coefficients in time through the equations.
struct DerivedState {
  Field q;
  Field zeta;
  VecField velocity;
};

std::vector<DerivedState> time_derivative_stack(const ModelState& state, const Model& model, int k_max);

}  // namespace bplab
