// NEON kernels for aarch64.  float64x2_t holds one complex double [re, im];
// NEON is baseline on aarch64 so no runtime feature check is needed.
#include "cobeam/simd/kernels.hpp"

#ifdef COBEAM_SIMD_HAVE_NEON

#include <arm_neon.h>

namespace cobeam::simd::neon {

cxd cdotc(std::size_t n, const cxd* x, const cxd* y) {
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  float64x2_t acc_p = vdupq_n_f64(0.0);  // (xr*yr, xi*yi)
  float64x2_t acc_x = vdupq_n_f64(0.0);  // (xr*yi, -xi*yr)
  const float64x2_t sign = {1.0, -1.0};
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xp + 2 * i);
    const float64x2_t yv = vld1q_f64(yp + 2 * i);
    acc_p = vfmaq_f64(acc_p, xv, yv);
    const float64x2_t ys = vextq_f64(yv, yv, 1);  // (yi, yr)
    acc_x = vfmaq_f64(acc_x, vmulq_f64(xv, sign), ys);
  }
  return {vaddvq_f64(acc_p), vaddvq_f64(acc_x)};
}

double norm_sq(std::size_t n, const cxd* x) {
  const double* xp = reinterpret_cast<const double*>(x);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xp + 2 * i);
    acc = vfmaq_f64(acc, xv, xv);
  }
  return vaddvq_f64(acc);
}

void axpy(std::size_t n, cxd a, const cxd* x, cxd* y) {
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const float64x2_t sign = {-1.0, 1.0};
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xp + 2 * i);
    const float64x2_t xs = vextq_f64(xv, xv, 1);  // (xi, xr)
    // (ar*xr - ai*xi, ar*xi + ai*xr)
    const float64x2_t prod =
        vfmaq_f64(vmulq_n_f64(xv, a.real()), vmulq_n_f64(xs, a.imag()), sign);
    vst1q_f64(yp + 2 * i, vaddq_f64(vld1q_f64(yp + 2 * i), prod));
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

}  // namespace cobeam::simd::neon

#endif  // COBEAM_SIMD_HAVE_NEON
