#include <random>
#include <vector>

#include "doctest.h"
#include "kzwork/errors.hpp"
#include "kzwork/kernels.hpp"
#include "kzwork/xxz_ed.hpp"

using namespace kzwork;
using kernels::cplx;

namespace {

std::vector<cplx> random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = {d(g), d(g)};
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("avx2 kernels match the scalar reference") {
  if (!kernels::cpu_has_avx2()) {
    MESSAGE("CPU lacks AVX2/FMA; only the scalar path is exercised");
    CHECK_THROWS_AS(kernels::force_isa(kernels::Isa::avx2), DomainError);
    return;
  }
  const auto& s = kernels::scalar::table();
  const auto& v = kernels::avx2::table();
  for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 8u, 17u, 1000u}) {
    CAPTURE(n);
    const auto x = random_vec(n, 1 + n), y = random_vec(n, 100 + n);
    CHECK(std::abs(s.dotc(x.data(), y.data(), n) - v.dotc(x.data(), y.data(), n)) <= 1e-13 * (1.0 + n));
    CHECK(std::abs(s.norm2(x.data(), n) - v.norm2(x.data(), n)) <= 1e-13 * (1.0 + n));

    auto ys = y, yv = y;
    s.axpy({0.3, -1.7}, x.data(), ys.data(), n);
    v.axpy({0.3, -1.7}, x.data(), yv.data(), n);
    CHECK(max_diff(ys, yv) <= 1e-15);

    auto xs = x, xv = x;
    s.scale({-0.25, 2.0}, xs.data(), n);
    v.scale({-0.25, 2.0}, xv.data(), n);
    CHECK(max_diff(xs, xv) <= 1e-15);
  }
}

TEST_CASE("avx2 sector matvec matches the scalar reference") {
  if (!kernels::cpu_has_avx2()) return;
  for (int n : {4, 10, 12}) {
    for (bool pbc : {true, false}) {
      const auto sec = build_sector(ChainSpec{n, pbc, 0});
      const auto view = sec->view(1.3);
      const auto x = random_vec(sec->dim(), 7);
      std::vector<cplx> ys(x.size()), yv(x.size());
      kernels::scalar::table().xxz_apply(view, 0.37, x.data(), ys.data());
      kernels::avx2::table().xxz_apply(view, 0.37, x.data(), yv.data());
      CHECK(max_diff(ys, yv) <= 1e-14);
    }
  }
}

TEST_CASE("dispatch can be forced and restored") {
  const auto before = kernels::active_isa();
  kernels::force_isa(kernels::Isa::scalar);
  CHECK(kernels::active_isa() == kernels::Isa::scalar);
  CHECK(&kernels::active() == &kernels::scalar::table());
  kernels::force_isa(before);
  CHECK(kernels::active_isa() == before);
}
