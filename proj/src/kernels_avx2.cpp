// Compiled with -mavx2 -mfma. Only reached after the CPUID check in kernels.cpp.
#include <immintrin.h>

#include "kzwork/kernels.hpp"

namespace kzwork::kernels::avx2 {
namespace {

// Two complex doubles per 256-bit register, laid out re0 im0 re1 im1.
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// returns a*x for packed complex x and broadcast complex a
inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) {
  __m256d xs = _mm256_permute_pd(x, 0b0101);
  return _mm256_fmaddsub_pd(x, ar, _mm256_mul_pd(xs, ai));
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
  __m256d same = _mm256_setzero_pd();   // xr*yr, xi*yi
  __m256d cross = _mm256_setzero_pd();  // xr*yi, xi*yr
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d a = load2(x + i);
    __m256d b = load2(y + i);
    same = _mm256_fmadd_pd(a, b, same);
    cross = _mm256_fmadd_pd(a, _mm256_permute_pd(b, 0b0101), cross);
  }
  alignas(32) double c[4];
  _mm256_store_pd(c, cross);
  double re = hsum(same);
  double im = (c[0] - c[1]) + (c[2] - c[3]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double norm2(const cplx* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d a = load2(x + i);
    acc = _mm256_fmadd_pd(a, a, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::norm(x[i]);
  return s;
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(y + i, _mm256_add_pd(load2(y + i), cmul(ar, ai, load2(x + i))));
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale(cplx a, cplx* x, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(x + i, cmul(ar, ai, load2(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

inline __m128d load1(const cplx* p) { return _mm_loadu_pd(reinterpret_cast<const double*>(p)); }

void xxz_apply(const XxzView& h, double delta, const cplx* x, cplx* y) {
  const std::size_t dim = h.zz.size();
  const __m256d hop = _mm256_set1_pd(h.scale * h.hop);
  const double dz = h.scale * delta;
  const std::int32_t* rp = h.row_ptr.data();
  const std::int32_t* col = h.col.data();
  std::size_t i = 0;
  // two rows per iteration; neighbor gathers are 128-bit loads
  for (; i + 2 <= dim; i += 2) {
    __m128d a0 = _mm_setzero_pd();
    __m128d a1 = _mm_setzero_pd();
    for (std::int32_t k = rp[i]; k < rp[i + 1]; ++k) a0 = _mm_add_pd(a0, load1(x + col[k]));
    for (std::int32_t k = rp[i + 1]; k < rp[i + 2]; ++k) a1 = _mm_add_pd(a1, load1(x + col[k]));
    __m256d acc = _mm256_set_m128d(a1, a0);
    __m256d d = _mm256_set_pd(dz * h.zz[i + 1], dz * h.zz[i + 1], dz * h.zz[i], dz * h.zz[i]);
    store2(y + i, _mm256_fmadd_pd(d, load2(x + i), _mm256_mul_pd(hop, acc)));
  }
  for (; i < dim; ++i) {
    cplx acc = 0.0;
    for (std::int32_t k = rp[i]; k < rp[i + 1]; ++k) acc += x[col[k]];
    y[i] = (h.scale * h.hop) * acc + dz * h.zz[i] * x[i];
  }
}

}  // namespace

const Table& table() {
  static const Table t{dotc, norm2, axpy, scale, xxz_apply};
  return t;
}

}  // namespace kzwork::kernels::avx2
