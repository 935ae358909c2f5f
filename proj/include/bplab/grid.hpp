#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>

#include "bplab/aligned.hpp"

namespace bplab {

using cplx = std::complex<double>;

struct GridSpec {
  int dim = 1;
  std::array<int, 2> n{256, 1};
  std::array<double, 2> length{6.283185307179586, 1.0};
  double gamma = 1.0;
};

/// Periodic sampling lattice on [0, L_x) x [0, L_y) with its real-to-complex
/// transform plans and frequency tables. Cheap to copy; all copies share the
/// same immutable plan set.
///
/// Nodes are stored row-major with x as the slow index: idx = ix * n_y + iy.
/// The spectrum is the r2c half-spectrum of that layout, so the y axis (the
/// only axis in 1D) carries n/2+1 coefficients.
class Grid {
 public:
  explicit Grid(const GridSpec& spec);

  const GridSpec& spec() const noexcept;
  int dim() const noexcept { return spec().dim; }
  int n(int axis) const noexcept { return spec().n[axis]; }
  double length(int axis) const noexcept { return spec().length[axis]; }
  double gamma() const noexcept { return spec().gamma; }

  std::size_t size() const noexcept;
  std::size_t spectral_size() const noexcept;
  double spacing(int axis) const noexcept { return length(axis) / n(axis); }
  double cell_volume() const noexcept;
  double coordinate(int axis, std::size_t node) const noexcept;

  /// Real symbol m of the twisted derivative (d/dx -> i*m). Zero on the
  /// axis's own Nyquist line so the derivative stays real and skew.
  std::span<const double> derivative_symbol(int axis) const noexcept;
  /// sum over axes of derivative_symbol^2: the symbol of -div_gamma(grad_gamma).
  std::span<const double> laplacian_symbol() const noexcept;
  /// |xi^gamma|^2 including Nyquist lines: the Bessel-potential weight.
  std::span<const double> wavenumber_sq() const noexcept;
  /// 1 inside the 2/3-rule band, 0 outside.
  std::span<const double> dealias_mask() const noexcept;
  /// Multiplicity of each half-spectrum coefficient in the full spectrum.
  std::span<const double> parseval_weight() const noexcept;

  /// Spectral index of integer mode (m_x[, m_y]); m_x may be negative in 2D,
  /// the last axis must be in [0, n/2].
  std::size_t mode_index(std::array<int, 2> mode) const;

  /// Unnormalized forward transform; in and out must be 64-byte aligned.
  void forward(const double* in, cplx* out) const;
  /// Normalized inverse transform. Destroys `in`.
  void inverse(cplx* in, double* out) const;
  /// Projects the self-conjugate lines of a half-spectrum onto Hermitian data.
  void enforce_hermitian(cplx* c) const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept;
  friend bool operator!=(const Grid& a, const Grid& b) noexcept { return !(a == b); }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

void require_same_grid(const Grid& a, const Grid& b);

}  // namespace bplab
