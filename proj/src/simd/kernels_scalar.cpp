#include "cobeam/simd/kernels.hpp"

namespace cobeam::simd::scalar {

cxd cdotc(std::size_t n, const cxd* x, const cxd* y) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double norm_sq(std::size_t n, const cxd* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return s;
}

void axpy(std::size_t n, cxd a, const cxd* x, cxd* y) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cxd(ar * xr - ai * xi, ar * xi + ai * xr);
  }
}

double quad_form(std::size_t n, const cxd* h, const cxd* W, std::size_t ld) {
  // h^H W h = sum_j (sum_i conj(h_i) W_ij) h_j; the result is real for
  // Hermitian W, the imaginary part is discarded.
  double re = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const cxd c = cdotc(n, h, W + j * ld);
    const double hr = h[j].real(), hi = h[j].imag();
    re += c.real() * hr - c.imag() * hi;
  }
  return re;
}

void rank1_accum(std::size_t n, double alpha, const cxd* h, cxd* A,
                 std::size_t ld) {
  for (std::size_t j = 0; j < n; ++j) {
    const cxd a = alpha * std::conj(h[j]);
    axpy(n, a, h, A + j * ld);
  }
}

}  // namespace cobeam::simd::scalar
