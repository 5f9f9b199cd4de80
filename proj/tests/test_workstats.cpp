#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "kzwork/errors.hpp"
#include "kzwork/fock_oracle.hpp"
#include "kzwork/master_integral.hpp"
#include "kzwork/workstats.hpp"

using namespace kzwork;
using std::numbers::pi;

namespace {

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

std::vector<double> mirrored(double h, int n) {
  std::vector<double> u;
  for (int j = -n; j <= n; ++j) u.push_back(j * h);
  return u;
}

}  // namespace

TEST_CASE("CFW invariants") {
  const auto u = mirrored(0.15, 16);
  const auto pg = QuenchProtocol::ground(1.0, 0.1, 5.0);
  const auto pt = QuenchProtocol::thermal(1.0, 0.1, 5.0, 2.0);
  CfwOptions disc;
  disc.modes = ModeSet::discrete;
  for (const auto& c : {cfw_ground(u, pg, 12, 3.51, asymptotic_source(pg)),
                        cfw_ground(u, pg, 12, 3.51, ode_source(pg), disc),
                        cfw_thermal(u, pt, 12, 3.51, asymptotic_source(pt)),
                        cfw_thermal(u, pt, 8, 1.0, ode_source(pt), disc)}) {
    const auto inv = check_invariants(c);
    CHECK(inv.symmetric_grid);
    CHECK(inv.normalization <= 1e-12);
    CHECK(inv.hermitian <= 1e-10);
    CHECK(inv.bound <= 1e-10);
  }
}

TEST_CASE("no ramp leaves a pure phase") {
  const auto u = mirrored(0.3, 5);
  const auto p = QuenchProtocol::ground(1.0, 0.0, 5.0);
  const auto c = cfw_ground(u, p, 12, 3.51, asymptotic_source(p));
  for (const auto& g : c.g) CHECK(std::abs(g - 1.0) <= 1e-14);
  const auto pt = QuenchProtocol::thermal(1.0, 0.0, 5.0, 1.0);
  const auto ct = cfw_thermal(u, pt, 12, 3.51, asymptotic_source(pt));
  for (const auto& g : ct.g) CHECK(std::abs(g - 1.0) <= 1e-12);
}

TEST_CASE("Jarzynski identity for the quadratic model") {
  for (double beta : {0.5, 2.0, 8.0})
    for (auto modes : {ModeSet::continuum, ModeSet::discrete}) {
      const auto p = QuenchProtocol::thermal(1.0, 0.1, 5.0, beta);
      CfwOptions o;
      o.modes = modes;
      const auto g = cfw_thermal_at({0.0, beta}, p, 12, 3.51, asymptotic_source(p), o);
      const double z = partition_ratio(p, 12, 3.51, modes);
      CAPTURE(beta);
      CHECK(std::abs(g - z) <= 1e-10 * z);
    }
}

TEST_CASE("large beta reproduces the ground-state curve") {
  const auto u = mirrored(0.2, 6);
  const auto pg = QuenchProtocol::ground(1.0, 0.1, 5.0);
  const auto pt = QuenchProtocol::thermal(1.0, 0.1, 5.0, 400.0);
  CfwOptions disc;
  disc.modes = ModeSet::discrete;
  const auto g = cfw_ground(u, pg, 12, 3.51, asymptotic_source(pg), disc);
  const auto t = cfw_thermal(u, pt, 12, 3.51, asymptotic_source(pt), disc);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(g.g[i] - t.g[i]) <= 1e-10);
}

TEST_CASE("discrete ground CFW equals the product of Fock-space pair traces") {
  const auto p = QuenchProtocol::ground(1.0, 0.1, 3.0);
  const int N = 8;
  const double alpha = 0.0, beta = 40.0;  // nearly zero temperature for the oracle
  const double v0 = luttinger_params(0.0).v, vt = luttinger_params(0.1).v;
  const double u[] = {-0.8, 0.35, 1.1};
  CfwOptions disc;
  disc.modes = ModeSet::discrete;
  const auto c = cfw_ground(u, p, N, alpha, ode_source(p), disc);
  for (std::size_t i = 0; i < 3; ++i) {
    cplx prod = std::exp(cplx(0.0, u[i] * ground_energy_shift(p, N, alpha, ModeSet::discrete)));
    for (double q : discrete_momenta(N)) {
      const auto m = solve_mode(q, p);
      const PairOracle o(v0 * q, vt * q, m.y1, m.y2, 24);
      prod *= o(u[i], beta);
    }
    CHECK(std::abs(prod - c.g[i]) <= 1e-4);
  }
}

TEST_CASE("finite-difference cumulants agree with closed forms") {
  const auto uh = stencil_grid(default_stencil_spacing(12, 1.0));
  for (double tau : {10.0, 100.0}) {
    const auto p = QuenchProtocol::ground(1.0, 0.1, tau);
    const auto fd = cumulants_from_cfw(cfw_ground(uh, p, 12, 3.51, asymptotic_source(p)), 3);
    const auto cf = cumulant_integrals_ground(p, 3.51, 12, 3);
    for (int n = 1; n <= 3; ++n) CHECK(rel_close(fd.at(n), cf.at(n), 1e-2));
    CHECK(fd.max_imag_residue >= 0.0);
  }
}

TEST_CASE("exact discrete cumulants agree with finite differences") {
  const auto p = QuenchProtocol::ground(1.0, 0.1, 4.0);
  CfwOptions disc;
  disc.modes = ModeSet::discrete;
  const auto src = asymptotic_source(p);
  for (auto conv : {Convention::bosonic, Convention::printed}) {
    disc.convention = conv;
    const auto fd = cumulants_from_cfw(cfw_ground(stencil_grid(0.02), p, 12, 3.51, src, disc), 3);
    const auto ex = cumulants_discrete_ground(p, 12, 3.51, src, 3, conv);
    for (int n = 1; n <= 3; ++n) CHECK(rel_close(fd.at(n), ex.at(n), 1e-6));
  }
}

TEST_CASE("slow-quench variance follows its leading term") {
  const double alpha = 3.51;
  const int N = 12;
  const double vt = luttinger_params(0.1).v, p0 = std::pow(0.1 / pi, 2);
  for (double tau : {300.0, 1000.0}) {
    const auto p = QuenchProtocol::ground(1.0, 0.1, tau);
    const double lead = N * vt * vt * p0 / (pi * tau * tau * alpha);
    CHECK(rel_close(cumulant_integrals_ground(p, alpha, N, 2).at(2), lead, 0.05));
  }
}

TEST_CASE("thermal cumulants: closed form against finite differences") {
  const auto p = QuenchProtocol::thermal(1.0, 0.1, 5.0, 2.0);
  const auto src = asymptotic_source(p);
  const auto fd = cumulants_from_cfw(cfw_thermal(stencil_grid(0.02), p, 12, 3.51, src), 2);
  const auto cf = cumulants_thermal(p, 3.51, 12, src);
  CHECK(rel_close(fd.at(1), cf.at(1), 1e-6));
  CHECK(rel_close(fd.at(2), cf.at(2), 1e-6));
}

TEST_CASE("the adiabatic shift matches its integral") {
  const auto p = QuenchProtocol::ground(1.0, 0.3, 1.0);
  const double v = luttinger_params(0.3).v;
  CHECK(rel_close(adiabatic_shift(p, 2.0), (v - 1.0) / (pi * 4.0), 1e-14));
  CHECK(rel_close(ground_energy_shift(p, 12, 2.0, ModeSet::continuum), 6.0 * adiabatic_shift(p, 2.0), 1e-14));
  const auto qs = discrete_momenta(12);
  REQUIRE(qs.size() == 6);
  CHECK(qs.front() == doctest::Approx(2.0 * pi / 12.0));
  CHECK(qs.back() == doctest::Approx(pi));
}

TEST_CASE("error paths") {
  const double u[] = {0.0, 0.1};
  const auto pg = QuenchProtocol::ground(1.0, 0.1, 5.0);
  const auto pt = QuenchProtocol::thermal(1.0, 0.1, 5.0, 1.0);
  CHECK_THROWS_AS(cfw_ground(u, pt, 12, 3.51, asymptotic_source(pt)), DomainError);
  CHECK_THROWS_AS(cfw_ground(u, pg, 11, 3.51, asymptotic_source(pg)), DomainError);
  CHECK_THROWS_AS(cfw_ground(u, pg, 12, 0.0, asymptotic_source(pg)), DomainError);
  CHECK_THROWS_AS(presets::alpha_inset(6), DomainError);
  CHECK_THROWS_AS(cumulant_integrals_ground(pg, 3.51, 12, 5), DomainError);

  // a sparse grid cannot be unwrapped reliably
  std::vector<double> coarse;
  for (int j = -8; j <= 8; ++j) coarse.push_back(2.0 * j);
  const auto pc = QuenchProtocol::ground(1.0, 0.5, 0.0);
  const auto c = cfw_ground(coarse, pc, 12, 0.1, asymptotic_source(pc));
  CHECK_THROWS_AS(cumulants_from_cfw(c, 2), GridTooCoarse);
}
