#pragma once

// Vector kernels used by the ED propagators. Each entry point has a scalar
// reference implementation and an AVX2/FMA variant; the variant is picked once
// at runtime from CPUID and can be forced for testing.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace kzwork::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

// Sparse XXZ Hamiltonian in a magnetization sector. Off-diagonal entries are all
// equal to `hop`, so only the column pattern is stored.
struct XxzView {
  std::span<const std::int32_t> row_ptr;  // size dim + 1
  std::span<const std::int32_t> col;
  std::span<const double> zz;  // diagonal of sum_j S^z_j S^z_{j+1}
  double hop = 0.5;
  double scale = 1.0;  // overall J
};

struct Table {
  cplx (*dotc)(const cplx*, const cplx*, std::size_t);
  double (*norm2)(const cplx*, std::size_t);
  void (*axpy)(cplx, const cplx*, cplx*, std::size_t);
  void (*scale)(cplx, cplx*, std::size_t);
  void (*xxz_apply)(const XxzView&, double, const cplx*, cplx*);
};

namespace scalar {
const Table& table();
}
namespace avx2 {
const Table& table();
}

bool cpu_has_avx2();
Isa active_isa();
// Overrides the dispatch; throws DomainError when avx2 is forced on a CPU without it.
void force_isa(Isa isa);
const Table& active();

// sum conj(x_i) y_i
inline cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  return active().dotc(x.data(), y.data(), x.size());
}
inline double norm2(std::span<const cplx> x) { return active().norm2(x.data(), x.size()); }
inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline void scale(cplx a, std::span<cplx> x) { active().scale(a, x.data(), x.size()); }
// y = scale * (hop * offdiag + delta * zz) x
inline void xxz_apply(const XxzView& h, double delta, std::span<const cplx> x, std::span<cplx> y) {
  active().xxz_apply(h, delta, x.data(), y.data());
}

}  // namespace kzwork::kernels
