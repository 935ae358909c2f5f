#include "bplab/bathymetry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bplab/spectral.hpp"

namespace bplab {
namespace {

constexpr double kMarginWarning = 0.1;

double periodic_offset(double x, double c, double length) {
  double d = std::fmod(x - c, length);
  if (d < -0.5 * length) d += length;
  if (d >= 0.5 * length) d -= length;
  return d;
}

double bump_value(const profile::GaussianBump& bump, const Grid& grid, double x, double y) {
  const double dx = periodic_offset(x, bump.center[0], grid.length(0));
  double r2 = dx * dx;
  if (grid.dim() == 2) {
    const double dy = periodic_offset(y, bump.center[1], grid.length(1));
    r2 += dy * dy;
  }
  return bump.height * std::exp(-r2 / (bump.width * bump.width));
}

void check_margin(double margin, WarningLog* log) {
  if (!(margin > 0.0)) {
    throw Error(ErrorCode::LogDomain,
                "1 + eps*zeta/h_b <= 0 somewhere (min " + std::to_string(margin) + ")");
  }
  if (log && margin < kMarginWarning) {
    log->push_back({"admissibility_margin", "1 + eps*zeta/h_b is approaching zero", margin});
  }
}

}  // namespace

Field sample_profile(const BottomProfile& profile, const Grid& grid) {
  return std::visit(
      [&](const auto& p) -> Field {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, profile::Flat>) {
          return Field(grid);
        } else if constexpr (std::is_same_v<P, profile::GaussianBump>) {
          if (!(p.width > 0.0)) throw Error(ErrorCode::InvalidArgument, "bump width must be positive");
          return Field::sample(grid, [&](double x, double y) { return bump_value(p, grid, x, y); });
        } else if constexpr (std::is_same_v<P, profile::Sinusoidal>) {
          const double k = 2.0 * std::numbers::pi * p.mode / grid.length(0);
          return Field::sample(grid, [&](double x, double) { return p.amplitude * std::cos(k * x); });
        } else {
          if (!(p.first.width > 0.0) || !(p.second.width > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "bump width must be positive");
          }
          return Field::sample(grid, [&](double x, double y) {
            return bump_value(p.first, grid, x, y) + bump_value(p.second, grid, x, y);
          });
        }
      },
      profile);
}

Bathymetry::Bathymetry(Field b, double beta)
    : b_(std::move(b)),
      beta_(beta),
      h_b_(b_.grid()),
      h_b2_(b_.grid()),
      h_b3_(b_.grid()),
      inv_h_b_(b_.grid()),
      grad_b_(b_.grid()),
      grad_hb_(b_.grid()) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "topography parameter beta must lie in [0, 1]");
  }
  if (!b_.is_finite()) throw Error(ErrorCode::InvalidArgument, "bottom profile is not finite");
  for (std::size_t i = 0; i < b_.size(); ++i) h_b_[i] = 1.0 - beta * b_[i];
  h_min_ = h_b_.min();
  h_max_ = h_b_.max();
  if (!(h_min_ > 0.0)) {
    throw Error(ErrorCode::NonpositiveDepth,
                "still-water depth 1 - beta*b reaches " + std::to_string(h_min_));
  }
  flat_ = beta == 0.0 || b_.max_abs() == 0.0;
  h_b2_ = h_b_ * h_b_;
  h_b3_ = h_b2_ * h_b_;
  inv_h_b_ = map(h_b_, [](double h) { return 1.0 / h; });
  grad_b_ = grad_gamma(b_);
  grad_hb_ = -beta * grad_b_;
}

Bathymetry build_bathymetry(const BottomProfile& profile, double beta, const Grid& grid) {
  return Bathymetry(sample_profile(profile, grid), beta);
}

WaterHeight water_height(const Field& zeta, double eps, const Bathymetry& bath) {
  require_same_grid(zeta.grid(), bath.grid());
  Field h = bath.h_b();
  h.axpy(eps, zeta);
  const double m = h.min();
  return {std::move(h), m, !(m > 0.0)};
}

double admissibility_margin(const Field& zeta, double eps, const Bathymetry& bath) {
  require_same_grid(zeta.grid(), bath.grid());
  double m = INFINITY;
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    const double v = 1.0 + eps * zeta[i] / bath.h_b()[i];
    if (!(v >= m)) m = v;
  }
  return m;
}

Field zeta_to_q(const Field& zeta, double eps, const Bathymetry& bath, WarningLog* log) {
  require_same_grid(zeta.grid(), bath.grid());
  if (eps == 0.0) return zeta * bath.inv_h_b();
  check_margin(admissibility_margin(zeta, eps, bath), log);
  Field q(zeta.grid());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::log1p(eps * zeta[i] / bath.h_b()[i]) / eps;
  return q;
}

Field q_to_zeta(const Field& q, double eps, const Bathymetry& bath) {
  require_same_grid(q.grid(), bath.grid());
  if (eps == 0.0) return bath.h_b() * q;
  Field zeta(q.grid());
  for (std::size_t i = 0; i < q.size(); ++i) zeta[i] = bath.h_b()[i] * std::expm1(eps * q[i]) / eps;
  return zeta;
}

Field q_positivity_factor(const Field& zeta, double eps, const Bathymetry& bath, WarningLog* log) {
  require_same_grid(zeta.grid(), bath.grid());
  if (eps != 0.0) check_margin(admissibility_margin(zeta, eps, bath), log);
  Field out(zeta.grid());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double hb = bath.h_b()[i];
    const double x = eps * zeta[i] / hb;
    // log(1+x)/(x*h_b), with its Taylor series where the quotient cancels.
    if (std::abs(x) < 1e-6) {
      out[i] = (1.0 - x / 2.0 + x * x / 3.0 - x * x * x / 4.0) / hb;
    } else {
      out[i] = std::log1p(x) / (x * hb);
    }
  }
  return out;
}

}  // namespace bplab
