#include "kzwork/kernels.hpp"

namespace kzwork::kernels::scalar {
namespace {

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double norm2(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
  return s;
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(cplx a, cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void xxz_apply(const XxzView& h, double delta, const cplx* x, cplx* y) {
  const std::size_t dim = h.zz.size();
  const double hop = h.scale * h.hop;
  const double dz = h.scale * delta;
  for (std::size_t i = 0; i < dim; ++i) {
    cplx acc = 0.0;
    for (std::int32_t k = h.row_ptr[i]; k < h.row_ptr[i + 1]; ++k) acc += x[h.col[k]];
    y[i] = hop * acc + dz * h.zz[i] * x[i];
  }
}

}  // namespace

const Table& table() {
  static const Table t{dotc, norm2, axpy, scale, xxz_apply};
  return t;
}

}  // namespace kzwork::kernels::scalar
