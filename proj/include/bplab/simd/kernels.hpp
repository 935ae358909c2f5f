#pragma once

// Data-parallel inner loops used by the spectral and time-stepping layers.
//
// Every kernel has a scalar reference implementation. On x86-64 an AVX2/FMA
// variant is compiled into its own translation unit and selected at runtime
// when the CPU reports support. BPLAB_SIMD=scalar|avx2|auto overrides the
// choice. The active table is fixed on first use, so a process is
// deterministic for a given machine and setting.

#include <complex>
#include <cstddef>
#include <string_view>

namespace bplab::simd {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;
  /// y += a*x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  /// out = a*x + b*y
  void (*lincomb)(double a, const double* x, double b, const double* y, double* out,
                  std::size_t n);
  /// out = x*y (pointwise)
  void (*mul)(const double* x, const double* y, double* out, std::size_t n);
  /// c[k] *= m[k]
  void (*scale_spectrum)(const double* m, cplx* c, std::size_t n);
  /// out[k] = i*m[k]*in[k]
  void (*imag_multiply)(const double* m, const cplx* in, cplx* out, std::size_t n);
  /// out[k] += i*m[k]*in[k]
  void (*imag_multiply_add)(const double* m, const cplx* in, cplx* out, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  /// sum_k w[k]*|c[k]|^2
  double (*weighted_norm2)(const double* w, const cplx* c, std::size_t n);
};

const KernelTable& scalar_kernels();

/// Returns nullptr when AVX2/FMA is not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();

/// Table selected for this process.
const KernelTable& active();

}  // namespace bplab::simd
