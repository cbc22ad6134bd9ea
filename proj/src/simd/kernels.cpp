// Runtime kernel selection.  The table is resolved once (magic static) from
// cpu capabilities, overridable with COBEAM_SIMD=scalar|avx2|neon|auto.
#include "cobeam/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cobeam::simd {

namespace {

struct Table {
  cxd (*cdotc)(std::size_t, const cxd*, const cxd*);
  double (*norm_sq)(std::size_t, const cxd*);
  void (*axpy)(std::size_t, cxd, const cxd*, cxd*);
  double (*quad_form)(std::size_t, const cxd*, const cxd*, std::size_t);
  void (*rank1_accum)(std::size_t, double, const cxd*, cxd*, std::size_t);
  Isa isa;
};

constexpr Table kScalar = {scalar::cdotc, scalar::norm_sq, scalar::axpy,
                           scalar::quad_form, scalar::rank1_accum, Isa::scalar};

#ifdef COBEAM_SIMD_HAVE_AVX2
constexpr Table kAvx2 = {avx2::cdotc, avx2::norm_sq, avx2::axpy,
                         avx2::quad_form, avx2::rank1_accum, Isa::avx2};

bool cpu_has_avx2() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

#ifdef COBEAM_SIMD_HAVE_NEON
constexpr Table kNeon = {neon::cdotc, neon::norm_sq, neon::axpy,
                         neon::quad_form, neon::rank1_accum, Isa::neon};
#endif

Table select() {
  const char* want = std::getenv("COBEAM_SIMD");
  if (want != nullptr && std::strcmp(want, "scalar") == 0) {
    return kScalar;
  }
#ifdef COBEAM_SIMD_HAVE_AVX2
  if (want != nullptr && std::strcmp(want, "avx2") == 0) {
    return cpu_has_avx2() ? kAvx2 : kScalar;
  }
#endif
#ifdef COBEAM_SIMD_HAVE_NEON
  if (want != nullptr && std::strcmp(want, "neon") == 0) {
    return kNeon;
  }
#endif
  // auto, unset, or an option this build does not provide
#ifdef COBEAM_SIMD_HAVE_AVX2
  if (cpu_has_avx2()) {
    return kAvx2;
  }
#endif
#ifdef COBEAM_SIMD_HAVE_NEON
  return kNeon;
#else
  return kScalar;
#endif
}

const Table& table() {
  static const Table t = select();
  return t;
}

}  // namespace

Isa active_isa() { return table().isa; }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
    default:
      return "scalar";
  }
}

cxd cdotc(std::size_t n, const cxd* x, const cxd* y) {
  return table().cdotc(n, x, y);
}

double norm_sq(std::size_t n, const cxd* x) { return table().norm_sq(n, x); }

void axpy(std::size_t n, cxd a, const cxd* x, cxd* y) {
  table().axpy(n, a, x, y);
}

double quad_form(std::size_t n, const cxd* h, const cxd* W, std::size_t ld) {
  return table().quad_form(n, h, W, ld);
}

void rank1_accum(std::size_t n, double alpha, const cxd* h, cxd* A,
                 std::size_t ld) {
  table().rank1_accum(n, alpha, h, A, ld);
}

}  // namespace cobeam::simd
