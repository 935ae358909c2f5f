#pragma once

// Energies, norms and the fitted quantities the experiments report.

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "bplab/models.hpp"

namespace bplab {

struct Trajectory;

struct DiagnosticsRecord {
  double time = 0.0;
  double EN = 0.0;
  double E_bp = 0.0;
  double E_thm = 0.0;
  double sup_U = 0.0;
  double sup_gradU = 0.0;
  /// Real parts of the normalized Fourier coefficients of zeta at the tracked modes.
  std::vector<double> modes;
};

/// 1/2 |zeta|^2 + 1/2 (h_b (I + mu T_b) V, V).
double energy_bp(const Field& zeta, const VecField& v, double mu, const Bathymetry& bath);
/// |zeta|_{H^N} + sqrt(mu) |grad zeta|_{H^N} + |V|_{H^N} + sqrt(mu) |grad V|_{H^N}.
double energy_EN(const Field& zeta, const VecField& v, double mu, int n);
/// mu |div V|^2_{H^s} + |(zeta, V)|^2_{H^s}.
double energy_theorem_E(const Field& zeta, const VecField& v, double mu, double s);

/// Sup norms of the unknowns and of their first derivatives.
std::pair<double, double> w1inf_norms(const ModelState& state);

struct DiagnosticsOptions {
  int energy_order = 3;        // N in E^N
  double theorem_order = 2.0;  // s in E_thm
  std::vector<std::array<int, 2>> modes;
};

/// Full record for a state; velocity-free models report zero for the velocity terms.
DiagnosticsRecord compute_record(const ModelState& state, const Model& model, const DiagnosticsOptions& options);

/// omega(k)^2 = |k|^2 / (1 + mu |k|^2 / 3) with the twisted wavenumber of `mode`.
double bp_dispersion_omega(const Grid& grid, std::array<int, 2> mode, double mu);

struct FrequencyFit {
  double omega = 0.0;
  int crossings = 0;
  double periods = 0.0;
};

/// Angular frequency of an oscillating signal from a least-squares fit of its
/// zero-crossing times. Throws InsufficientSamples below three periods.
FrequencyFit fit_frequency(std::span<const double> times, std::span<const double> signal);

struct DispersionMeasurement {
  double omega_measured = 0.0;
  double omega_predicted = 0.0;
  double rel_err = 0.0;
};

/// Frequency of tracked mode `mode_slot` of a linear flat-bottom BP trajectory.
DispersionMeasurement measure_dispersion(const Trajectory& trajectory, std::size_t mode_slot, const Grid& grid,
                                         double mu);

/// Least-squares slope of log(error) against log(parameter).
/// Throws DegenerateFit when errors sit at the rounding floor.
double estimate_order(std::span<const std::pair<double, double>> samples);

/// -1 / (eps min u0'); throws NoShock when u0' >= 0 everywhere.
double burgers_shock_time(const Field& u0, double eps);

}  // namespace bplab
