#pragma once

#include <array>
#include <variant>

#include "bplab/errors.hpp"
#include "bplab/field.hpp"

namespace bplab {

namespace profile {

struct Flat {};

/// height * exp(-|X - center|^2 / width^2), distance taken to the nearest periodic image.
struct GaussianBump {
  std::array<double, 2> center{0.0, 0.0};
  double width = 1.0;
  double height = 1.0;
};

/// amplitude * cos(2 pi mode x / L_x)
struct Sinusoidal {
  int mode = 1;
  double amplitude = 1.0;
};

struct TwoBumps {
  GaussianBump first;
  GaussianBump second;
};

}  // namespace profile

using BottomProfile = std::variant<profile::Flat, profile::GaussianBump, profile::Sinusoidal,
                                   profile::TwoBumps>;

Field sample_profile(const BottomProfile& profile, const Grid& grid);

/// Fixed bottom b with the still-water depth h_b = 1 - beta*b and the
/// coefficient fields the elliptic operators need. Immutable.
class Bathymetry {
 public:
  /// Throws NonpositiveDepth when min(1 - beta*b) <= 0.
  Bathymetry(Field b, double beta);

  const Grid& grid() const noexcept { return b_.grid(); }
  const Field& b() const noexcept { return b_; }
  double beta() const noexcept { return beta_; }
  const Field& h_b() const noexcept { return h_b_; }
  const Field& h_b_squared() const noexcept { return h_b2_; }
  const Field& h_b_cubed() const noexcept { return h_b3_; }
  const Field& inv_h_b() const noexcept { return inv_h_b_; }
  const VecField& grad_b() const noexcept { return grad_b_; }
  const VecField& grad_hb() const noexcept { return grad_hb_; }
  double h_min() const noexcept { return h_min_; }
  double h_max() const noexcept { return h_max_; }
  /// True when beta*b vanishes identically.
  bool is_flat() const noexcept { return flat_; }

 private:
  Field b_;
  double beta_;
  Field h_b_;
  Field h_b2_;
  Field h_b3_;
  Field inv_h_b_;
  VecField grad_b_;
  VecField grad_hb_;
  double h_min_ = 1.0;
  double h_max_ = 1.0;
  bool flat_ = true;
};

Bathymetry build_bathymetry(const BottomProfile& profile, double beta, const Grid& grid);

struct WaterHeight {
  Field h;
  double min_h;
  bool dry;  // min h <= 0
};

/// h = 1 + eps*zeta - beta*b.
WaterHeight water_height(const Field& zeta, double eps, const Bathymetry& bath);

/// min over nodes of 1 + eps*zeta/h_b.
double admissibility_margin(const Field& zeta, double eps, const Bathymetry& bath);

/// q = log(1 + eps*zeta/h_b)/eps, with the eps -> 0 limit zeta/h_b.
/// Throws LogDomain when the logarithm's argument is nonpositive somewhere;
/// records a warning in `log` when the margin drops below 0.1.
Field zeta_to_q(const Field& zeta, double eps, const Bathymetry& bath, WarningLog* log = nullptr);

/// zeta = h_b*(exp(eps*q) - 1)/eps, with the eps -> 0 limit h_b*q.
Field q_to_zeta(const Field& q, double eps, const Bathymetry& bath);

/// Q(zeta) = int_0^1 dt/(h_b + eps*t*zeta), so that q = Q(zeta)*zeta.
Field q_positivity_factor(const Field& zeta, double eps, const Bathymetry& bath,
                          WarningLog* log = nullptr);

}  // namespace bplab
