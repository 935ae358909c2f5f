#include "bplab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "bplab/errors.hpp"

namespace bplab {
namespace {

// The FFTW planner is not reentrant; plan execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

struct Grid::Impl {
  GridSpec spec;
  std::size_t size = 0;
  std::size_t spectral_size = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  RealVector deriv[2];
  RealVector laplacian;
  RealVector wavenumber_sq;
  RealVector dealias;
  RealVector weight;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

Grid::Grid(const GridSpec& spec) {
  if (spec.dim != 1 && spec.dim != 2) {
    throw Error(ErrorCode::InvalidArgument, "grid dimension must be 1 or 2");
  }
  if (!(spec.gamma > 0.0 && spec.gamma <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "transversality gamma must lie in (0, 1]");
  }
  for (int a = 0; a < spec.dim; ++a) {
    if (spec.n[a] < 8 || !is_power_of_two(spec.n[a])) {
      throw Error(ErrorCode::InvalidArgument, "points per axis must be a power of two >= 8");
    }
    if (!(spec.length[a] > 0.0) || !std::isfinite(spec.length[a])) {
      throw Error(ErrorCode::InvalidArgument, "domain length must be positive");
    }
  }

  auto impl = std::make_shared<Impl>();
  impl->spec = spec;
  if (spec.dim == 1) {
    impl->spec.n[1] = 1;
    impl->spec.length[1] = 1.0;
  }
  const int nx = impl->spec.n[0];
  const int ny = impl->spec.n[1];
  const int halved = spec.dim == 1 ? nx : ny;   // last axis, carries n/2+1
  const int outer = spec.dim == 1 ? 1 : nx;     // 2D: full x axis
  const std::size_t half = static_cast<std::size_t>(halved / 2 + 1);
  impl->size = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  impl->spectral_size = static_cast<std::size_t>(outer) * half;

  const std::size_t ns = impl->spectral_size;
  for (auto& d : impl->deriv) d.assign(ns, 0.0);
  impl->laplacian.assign(ns, 0.0);
  impl->wavenumber_sq.assign(ns, 0.0);
  impl->dealias.assign(ns, 0.0);
  impl->weight.assign(ns, 0.0);

  const double two_pi = 2.0 * std::numbers::pi;
  const auto signed_mode = [](int idx, int n) { return idx <= n / 2 ? idx : idx - n; };

  for (int i0 = 0; i0 < outer; ++i0) {
    for (std::size_t i1 = 0; i1 < half; ++i1) {
      const std::size_t k = static_cast<std::size_t>(i0) * half + i1;
      const int last = static_cast<int>(i1);
      double xi_x = 0.0, xi_y = 0.0;
      bool nyq_x = false, nyq_y = false;
      int mx = 0, my = 0;
      if (spec.dim == 1) {
        mx = last;
        xi_x = two_pi * mx / impl->spec.length[0];
        nyq_x = (last == nx / 2);
      } else {
        mx = signed_mode(i0, nx);
        my = last;
        xi_x = two_pi * mx / impl->spec.length[0];
        xi_y = impl->spec.gamma * two_pi * my / impl->spec.length[1];
        nyq_x = (i0 == nx / 2);
        nyq_y = (last == ny / 2);
      }
      impl->deriv[0][k] = nyq_x ? 0.0 : xi_x;
      impl->deriv[1][k] = nyq_y ? 0.0 : xi_y;
      impl->laplacian[k] = impl->deriv[0][k] * impl->deriv[0][k] + impl->deriv[1][k] * impl->deriv[1][k];
      impl->wavenumber_sq[k] = xi_x * xi_x + xi_y * xi_y;
      const bool keep_x = 3 * std::abs(mx) < nx;
      const bool keep_y = spec.dim == 1 || 3 * std::abs(my) < ny;
      impl->dealias[k] = (keep_x && keep_y) ? 1.0 : 0.0;
      const bool self_conjugate = (last == 0) || (2 * last == halved);
      impl->weight[k] = self_conjugate ? 1.0 : 2.0;
    }
  }

  {
    std::lock_guard lock(planner_mutex());
    RealVector r(impl->size);
    ComplexVector c(impl->spectral_size);
    auto* cptr = reinterpret_cast<fftw_complex*>(c.data());
    const unsigned flags = FFTW_ESTIMATE;
    if (spec.dim == 1) {
      impl->forward = fftw_plan_dft_r2c_1d(nx, r.data(), cptr, flags);
      impl->backward = fftw_plan_dft_c2r_1d(nx, cptr, r.data(), flags);
    } else {
      impl->forward = fftw_plan_dft_r2c_2d(nx, ny, r.data(), cptr, flags);
      impl->backward = fftw_plan_dft_c2r_2d(nx, ny, cptr, r.data(), flags);
    }
  }
  if (!impl->forward || !impl->backward) {
    throw Error(ErrorCode::InvalidArgument, "FFT planning failed");
  }
  impl_ = std::move(impl);
}

const GridSpec& Grid::spec() const noexcept { return impl_->spec; }
std::size_t Grid::size() const noexcept { return impl_->size; }
std::size_t Grid::spectral_size() const noexcept { return impl_->spectral_size; }

double Grid::cell_volume() const noexcept {
  double v = spacing(0);
  if (dim() == 2) v *= spacing(1);
  return v;
}

double Grid::coordinate(int axis, std::size_t node) const noexcept {
  const std::size_t ny = static_cast<std::size_t>(impl_->spec.n[1]);
  const std::size_t index = axis == 0 ? node / ny : node % ny;
  return static_cast<double>(index) * spacing(axis);
}

std::span<const double> Grid::derivative_symbol(int axis) const noexcept { return impl_->deriv[axis]; }
std::span<const double> Grid::laplacian_symbol() const noexcept { return impl_->laplacian; }
std::span<const double> Grid::wavenumber_sq() const noexcept { return impl_->wavenumber_sq; }
std::span<const double> Grid::dealias_mask() const noexcept { return impl_->dealias; }
std::span<const double> Grid::parseval_weight() const noexcept { return impl_->weight; }

std::size_t Grid::mode_index(std::array<int, 2> mode) const {
  const int nx = n(0);
  if (dim() == 1) {
    if (mode[0] < 0 || mode[0] > nx / 2) {
      throw Error(ErrorCode::InvalidArgument, "mode outside half spectrum");
    }
    return static_cast<std::size_t>(mode[0]);
  }
  const int ny = n(1);
  if (mode[1] < 0 || mode[1] > ny / 2 || std::abs(mode[0]) > nx / 2) {
    throw Error(ErrorCode::InvalidArgument, "mode outside half spectrum");
  }
  const int i0 = mode[0] >= 0 ? mode[0] : mode[0] + nx;
  return static_cast<std::size_t>(i0) * static_cast<std::size_t>(ny / 2 + 1) +
         static_cast<std::size_t>(mode[1]);
}

void Grid::forward(const double* in, cplx* out) const {
  fftw_execute_dft_r2c(impl_->forward, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void Grid::inverse(cplx* in, double* out) const {
  enforce_hermitian(in);
  fftw_execute_dft_c2r(impl_->backward, reinterpret_cast<fftw_complex*>(in), out);
  const double scale = 1.0 / static_cast<double>(impl_->size);
  for (std::size_t i = 0; i < impl_->size; ++i) out[i] *= scale;
}

void Grid::enforce_hermitian(cplx* c) const {
  const std::size_t half = static_cast<std::size_t>((dim() == 1 ? n(0) : n(1)) / 2 + 1);
  const std::size_t last_cols[2] = {0, half - 1};
  if (dim() == 1) {
    for (std::size_t col : last_cols) c[col] = cplx(c[col].real(), 0.0);
    return;
  }
  const int nx = n(0);
  for (std::size_t col : last_cols) {
    for (int i0 = 0; i0 <= nx / 2; ++i0) {
      const int j0 = (nx - i0) % nx;
      cplx& a = c[static_cast<std::size_t>(i0) * half + col];
      cplx& b = c[static_cast<std::size_t>(j0) * half + col];
      const cplx avg = 0.5 * (a + std::conj(b));
      a = avg;
      b = std::conj(avg);
    }
  }
}

bool operator==(const Grid& a, const Grid& b) noexcept {
  if (a.impl_ == b.impl_) return true;
  const GridSpec& x = a.spec();
  const GridSpec& y = b.spec();
  return x.dim == y.dim && x.n == y.n && x.length == y.length && x.gamma == y.gamma;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (a != b) throw Error(ErrorCode::GridMismatch, "operands live on different grids");
}

}  // namespace bplab
