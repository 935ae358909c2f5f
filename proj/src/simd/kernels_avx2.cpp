// AVX2/FMA variants. This translation unit is built with -mavx2 -mfma and is
// only entered after the dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <cmath>

#include "bplab/simd/kernels.hpp"

namespace bplab::simd {
namespace {

// (m0, m0, m1, m1) from two consecutive multipliers.
inline __m256d duplicate_pairs(const double* m) {
  const __m128d mm = _mm_loadu_pd(m);
  return _mm256_set_m128d(_mm_unpackhi_pd(mm, mm), _mm_unpacklo_pd(mm, mm));
}

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void lincomb(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), by));
  }
  for (; i < n; ++i) out[i] = std::fma(a, x[i], b * y[i]);
}

void mul(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void scale_spectrum(const double* m, cplx* c, std::size_t n) {
  double* d = reinterpret_cast<double*>(c);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d md = duplicate_pairs(m + k);
    _mm256_storeu_pd(d + 2 * k, _mm256_mul_pd(md, _mm256_loadu_pd(d + 2 * k)));
  }
  for (; k < n; ++k) c[k] *= m[k];
}

void imag_multiply(const double* m, const cplx* in, cplx* out, std::size_t n) {
  const double* s = reinterpret_cast<const double*>(in);
  double* d = reinterpret_cast<double*>(out);
  const __m256d sign = _mm256_set_pd(1.0, -1.0, 1.0, -1.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d md = _mm256_mul_pd(duplicate_pairs(m + k), sign);
    const __m256d swapped = _mm256_permute_pd(_mm256_loadu_pd(s + 2 * k), 0b0101);
    _mm256_storeu_pd(d + 2 * k, _mm256_mul_pd(md, swapped));
  }
  for (; k < n; ++k) out[k] = cplx(-m[k] * in[k].imag(), m[k] * in[k].real());
}

void imag_multiply_add(const double* m, const cplx* in, cplx* out, std::size_t n) {
  const double* s = reinterpret_cast<const double*>(in);
  double* d = reinterpret_cast<double*>(out);
  const __m256d sign = _mm256_set_pd(1.0, -1.0, 1.0, -1.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d md = _mm256_mul_pd(duplicate_pairs(m + k), sign);
    const __m256d swapped = _mm256_permute_pd(_mm256_loadu_pd(s + 2 * k), 0b0101);
    const __m256d prod = _mm256_mul_pd(md, swapped);
    _mm256_storeu_pd(d + 2 * k, _mm256_add_pd(_mm256_loadu_pd(d + 2 * k), prod));
  }
  for (; k < n; ++k) out[k] += cplx(-m[k] * in[k].imag(), m[k] * in[k].real());
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double max_abs(const double* x, std::size_t n) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d vmax = _mm256_setzero_pd();
  __m256d nan_seen = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_and_pd(_mm256_loadu_pd(x + i), abs_mask);
    nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(v, v, _CMP_UNORD_Q));
    vmax = _mm256_max_pd(vmax, v);
  }
  if (_mm256_movemask_pd(nan_seen) != 0) return std::nan("");
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vmax);
  double m = lanes[0];
  for (int l = 1; l < 4; ++l) m = lanes[l] > m ? lanes[l] : m;
  for (; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (std::isnan(a)) return a;
    if (a > m) m = a;
  }
  return m;
}

double weighted_norm2(const double* w, const cplx* c, std::size_t n) {
  const double* d = reinterpret_cast<const double*>(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d v = _mm256_loadu_pd(d + 2 * k);
    acc = _mm256_fmadd_pd(duplicate_pairs(w + k), _mm256_mul_pd(v, v), acc);
  }
  double s = horizontal_sum(acc);
  for (; k < n; ++k) s += w[k] * std::norm(c[k]);
  return s;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2",        axpy, lincomb, mul,  scale_spectrum,
                                 imag_multiply, imag_multiply_add, dot, max_abs,
                                 weighted_norm2};
  return table;
}

}  // namespace bplab::simd
