#pragma once
// Complex double-precision kernels for the inner loops shared by all modules:
// conjugated dot products, quadratic forms h^H W h, and rank-1 Hermitian
// accumulation.  A scalar reference implementation always exists; on x86-64 an
// AVX2+FMA variant and on AArch64 a NEON variant are compiled in and selected
// at runtime.  The environment variable COBEAM_SIMD=scalar|avx2|neon|auto
// overrides the selection (unknown or unavailable names fall back to scalar).
//
// Matrices are column-major with leading dimension `ld` (Eigen's default
// storage), vectors contiguous.

#include <complex>
#include <cstddef>
#include <string_view>

namespace cobeam::simd {

using cxd = std::complex<double>;

// sum_i conj(x[i]) * y[i]
cxd cdotc(std::size_t n, const cxd* x, const cxd* y);

// sum_i |x[i]|^2
double norm_sq(std::size_t n, const cxd* x);

// y[i] += a * x[i]
void axpy(std::size_t n, cxd a, const cxd* x, cxd* y);

// Re(h^H W h) for Hermitian W (n x n, column-major, leading dimension ld).
double quad_form(std::size_t n, const cxd* h, const cxd* W, std::size_t ld);

// A += alpha * h h^H with alpha real; A column-major, leading dimension ld.
void rank1_accum(std::size_t n, double alpha, const cxd* h, cxd* A,
                 std::size_t ld);

enum class Isa { scalar, avx2, neon };

// Instruction set actually dispatched to (resolved once, on first use).
Isa active_isa();
std::string_view isa_name(Isa isa);

// Reference implementations, always available.  The dispatched functions above
// must agree with these to floating-point reassociation error.
namespace scalar {
cxd cdotc(std::size_t n, const cxd* x, const cxd* y);
double norm_sq(std::size_t n, const cxd* x);
void axpy(std::size_t n, cxd a, const cxd* x, cxd* y);
double quad_form(std::size_t n, const cxd* h, const cxd* W, std::size_t ld);
void rank1_accum(std::size_t n, double alpha, const cxd* h, cxd* A,
                 std::size_t ld);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define COBEAM_SIMD_HAVE_AVX2 1
namespace avx2 {
cxd cdotc(std::size_t n, const cxd* x, const cxd* y);
double norm_sq(std::size_t n, const cxd* x);
void axpy(std::size_t n, cxd a, const cxd* x, cxd* y);
double quad_form(std::size_t n, const cxd* h, const cxd* W, std::size_t ld);
void rank1_accum(std::size_t n, double alpha, const cxd* h, cxd* A,
                 std::size_t ld);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define COBEAM_SIMD_HAVE_NEON 1
namespace neon {
cxd cdotc(std::size_t n, const cxd* x, const cxd* y);
double norm_sq(std::size_t n, const cxd* x);
void axpy(std::size_t n, cxd a, const cxd* x, cxd* y);
double quad_form(std::size_t n, const cxd* h, const cxd* W, std::size_t ld);
void rank1_accum(std::size_t n, double alpha, const cxd* h, cxd* A,
                 std::size_t ld);
}  // namespace neon
#endif

}  // namespace cobeam::simd
