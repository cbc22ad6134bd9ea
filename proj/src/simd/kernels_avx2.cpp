// AVX2+FMA kernels.  One __m256d holds two complex doubles as
// [re0, im0, re1, im1]; this file is compiled with -mavx2 -mfma and must only
// be entered after a runtime cpuid check (see kernels.cpp).
#include <immintrin.h>

#include "cobeam/simd/kernels.hpp"

#ifdef COBEAM_SIMD_HAVE_AVX2

namespace cobeam::simd::avx2 {

cxd cdotc(std::size_t n, const cxd* x, const cxd* y) {
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  __m256d acc_p = _mm256_setzero_pd();  // pairs (xr*yr, xi*yi)
  __m256d acc_x = _mm256_setzero_pd();  // pairs (xr*yi, -xi*yr)
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    acc_p = _mm256_fmadd_pd(xv, yv, acc_p);
    const __m256d ys = _mm256_permute_pd(yv, 0b0101);  // swap re/im per pair
    acc_x = _mm256_fmadd_pd(_mm256_mul_pd(xv, sign), ys, acc_x);
  }
  // hadd interleaves lane-local pair sums: [p0+p1, x0+x1, p2+p3, x2+x3]
  const __m256d h = _mm256_hadd_pd(acc_p, acc_x);
  const __m128d s =
      _mm_add_pd(_mm256_castpd256_pd128(h), _mm256_extractf128_pd(h, 1));
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  double re = out[0], im = out[1];
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double norm_sq(std::size_t n, const cxd* x) {
  const double* xp = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  const __m128d s =
      _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
  double out = _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
  for (; i < n; ++i) {
    out += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return out;
}

void axpy(std::size_t n, cxd a, const cxd* x, cxd* y) {
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const __m256d arv = _mm256_set1_pd(a.real());
  const __m256d aiv = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d xs = _mm256_permute_pd(xv, 0b0101);  // [xi, xr] per pair
    // fmaddsub: even slots ar*xr - ai*xi, odd slots ar*xi + ai*xr
    const __m256d prod = _mm256_fmaddsub_pd(arv, xv, _mm256_mul_pd(aiv, xs));
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), prod));
  }
  const double ar = a.real(), ai = a.imag();
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cxd(ar * xr - ai * xi, ar * xi + ai * xr);
  }
}

double quad_form(std::size_t n, const cxd* h, const cxd* W, std::size_t ld) {
  double re = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const cxd c = cdotc(n, h, W + j * ld);
    re += c.real() * h[j].real() - c.imag() * h[j].imag();
  }
  return re;
}

void rank1_accum(std::size_t n, double alpha, const cxd* h, cxd* A,
                 std::size_t ld) {
  for (std::size_t j = 0; j < n; ++j) {
    axpy(n, alpha * std::conj(h[j]), h, A + j * ld);
  }
}

}  // namespace cobeam::simd::avx2

#endif  // COBEAM_SIMD_HAVE_AVX2
