#include "bplab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bplab/spectral.hpp"
#include "bplab/timeloop.hpp"

namespace bplab {

double energy_bp(const Field& zeta, const VecField& v, double mu, const Bathymetry& bath) {
  return 0.5 * inner(zeta, zeta) + 0.5 * inner(apply_weighted(OperatorKind::IPlusMuTb, v, mu, bath), v);
}

namespace {

double gradient_hs(const VecField& v, double s) {
  double sum = 0.0;
  for (int a = 0; a < v.dim(); ++a) {
    const double n = sobolev_norm(grad_gamma(v[a]), s);
    sum += n * n;
  }
  return std::sqrt(sum);
}

}  // namespace

double energy_EN(const Field& zeta, const VecField& v, double mu, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "energy order must be >= 0");
  const double s = static_cast<double>(n);
  double e = sobolev_norm(zeta, s) + sobolev_norm(v, s);
  if (mu > 0.0) e += std::sqrt(mu) * (sobolev_norm(grad_gamma(zeta), s) + gradient_hs(v, s));
  return e;
}

double energy_theorem_E(const Field& zeta, const VecField& v, double mu, double s) {
  const double z = sobolev_norm(zeta, s);
  const double u = sobolev_norm(v, s);
  double e = z * z + u * u;
  if (mu > 0.0) {
    const double d = sobolev_norm(div_gamma(v), s);
    e += mu * d * d;
  }
  return e;
}

std::pair<double, double> w1inf_norms(const ModelState& state) {
  double sup = state.surface.max_abs();
  double grad = sup_gradient(state.surface);
  if (state.velocity) {
    for (int a = 0; a < state.velocity->dim(); ++a) {
      const Field& c = (*state.velocity)[a];
      sup = std::max(sup, c.max_abs());
      grad = std::max(grad, sup_gradient(c));
    }
  }
  return {sup, grad};
}

DiagnosticsRecord compute_record(const ModelState& state, const Model& model, const DiagnosticsOptions& options) {
  DiagnosticsRecord rec;
  rec.time = state.time;
  const Field zeta = model.surface_elevation(state);
  const VecField v = state.velocity ? *state.velocity : VecField(zeta.grid());
  const double mu = model.params().mu;
  rec.EN = energy_EN(zeta, v, mu, options.energy_order);
  rec.E_bp = energy_bp(zeta, v, mu, model.bathymetry());
  rec.E_thm = energy_theorem_E(zeta, v, mu, options.theorem_order);
  std::tie(rec.sup_U, rec.sup_gradU) = w1inf_norms(state);
  rec.modes.reserve(options.modes.size());
  for (const auto& m : options.modes) rec.modes.push_back(mode_coefficient(zeta, m).real());
  return rec;
}

double bp_dispersion_omega(const Grid& grid, std::array<int, 2> mode, double mu) {
  const double kx = 2.0 * std::numbers::pi * mode[0] / grid.length(0);
  const double ky = grid.dim() == 2 ? grid.gamma() * 2.0 * std::numbers::pi * mode[1] / grid.length(1) : 0.0;
  const double k2 = kx * kx + ky * ky;
  return std::sqrt(k2 / (1.0 + mu * k2 / 3.0));
}

FrequencyFit fit_frequency(std::span<const double> times, std::span<const double> signal) {
  if (times.size() != signal.size()) throw Error(ErrorCode::InvalidArgument, "time and signal lengths differ");
  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < signal.size(); ++i) {
    const double a = signal[i], b = signal[i + 1];
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
      if (b == 0.0) continue;  // counted as the start of the next interval
      crossings.push_back(times[i] + (times[i + 1] - times[i]) * a / (a - b));
    }
  }
  if (crossings.size() < 3) {
    throw Error(ErrorCode::InsufficientSamples, "only " + std::to_string(crossings.size()) + " zero crossings");
  }
  // t_j = t_0 + j * (pi / omega)
  const auto m = static_cast<double>(crossings.size());
  double sj = 0.0, st = 0.0, sjj = 0.0, sjt = 0.0;
  for (std::size_t j = 0; j < crossings.size(); ++j) {
    const auto x = static_cast<double>(j);
    sj += x;
    st += crossings[j];
    sjj += x * x;
    sjt += x * crossings[j];
  }
  const double half_period = (m * sjt - sj * st) / (m * sjj - sj * sj);
  FrequencyFit fit;
  fit.omega = std::numbers::pi / half_period;
  fit.crossings = static_cast<int>(crossings.size());
  fit.periods = (times.back() - times.front()) / (2.0 * half_period);
  if (fit.periods < 3.0) {
    throw Error(ErrorCode::InsufficientSamples,
                "record spans " + std::to_string(fit.periods) + " periods, at least 3 are needed");
  }
  return fit;
}

DispersionMeasurement measure_dispersion(const Trajectory& trajectory, std::size_t mode_slot, const Grid& grid,
                                         double mu) {
  if (mode_slot >= trajectory.modes.size()) throw Error(ErrorCode::InvalidArgument, "mode slot not tracked");
  std::vector<double> t, a;
  for (const auto& r : trajectory.records) {
    t.push_back(r.time);
    a.push_back(r.modes.at(mode_slot));
  }
  DispersionMeasurement out;
  out.omega_measured = fit_frequency(t, a).omega;
  out.omega_predicted = bp_dispersion_omega(grid, trajectory.modes[mode_slot], mu);
  out.rel_err = std::abs(out.omega_measured - out.omega_predicted) / out.omega_predicted;
  return out;
}

double estimate_order(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 3) throw Error(ErrorCode::InvalidArgument, "order estimate needs at least 3 points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [p, e] : samples) {
    if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "parameters must be positive");
    if (!std::isfinite(e) || e <= 1e-14) {
      throw Error(ErrorCode::DegenerateFit, "error " + std::to_string(e) + " is at the rounding floor");
    }
    const double x = std::log(p), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto m = static_cast<double>(samples.size());
  const double den = m * sxx - sx * sx;
  if (!(std::abs(den) > 1e-12)) throw Error(ErrorCode::DegenerateFit, "parameters do not vary");
  return (m * sxy - sx * sy) / den;
}

double burgers_shock_time(const Field& u0, double eps) {
  if (u0.grid().dim() != 1) throw Error(ErrorCode::InvalidArgument, "Burgers is one-dimensional");
  const double slope = partial(u0, 0).min();
  if (!(eps > 0.0) || !(slope < 0.0)) throw Error(ErrorCode::NoShock, "u0' >= 0 everywhere or eps = 0");
  return -1.0 / (eps * slope);
}

}  // namespace bplab
