#include <algorithm>
#include <cmath>

#include "bplab/simd/kernels.hpp"

namespace bplab::simd {
namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void lincomb(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void mul(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void scale_spectrum(const double* m, cplx* c, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) c[k] *= m[k];
}

void imag_multiply(const double* m, const cplx* in, cplx* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = cplx(-m[k] * in[k].imag(), m[k] * in[k].real());
}

void imag_multiply_add(const double* m, const cplx* in, cplx* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    out[k] += cplx(-m[k] * in[k].imag(), m[k] * in[k].real());
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // NaN must propagate so corruption is visible to callers.
    const double a = std::fabs(x[i]);
    if (std::isnan(a)) return a;
    if (a > m) m = a;
  }
  return m;
}

double weighted_norm2(const double* w, const cplx* c, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += w[k] * std::norm(c[k]);
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar",       axpy, lincomb, mul,  scale_spectrum,
                                 imag_multiply,  imag_multiply_add, dot, max_abs,
                                 weighted_norm2};
  return table;
}

}  // namespace bplab::simd
